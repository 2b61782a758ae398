#include "hrtlab/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Dense>

#include "hrtlab/errors.hpp"

namespace hrtlab {

namespace {

std::vector<double> axis_nodes(double lo, double hi, double step) {
  std::vector<double> nodes;
  const double extent = hi - lo;
  const auto n_steps =
      static_cast<std::size_t>(std::max(0.0, std::floor(extent / step + 1e-9)));
  nodes.reserve(n_steps + 2);
  for (std::size_t k = 0; k <= n_steps; ++k) nodes.push_back(lo + step * k);
  if (nodes.back() < hi - step * 1e-9) nodes.push_back(hi);
  return nodes;
}

}  // namespace

FieldGrid scan(const ExtensionEvaluator& e, const Rect& rect, double step,
               const QuadratureSpec& q, int threads) {
  if (!(step > 0.0)) throw InvalidSpec("scan step must be positive");
  if (!(rect.a_min < rect.a_max) || !(rect.b_min < rect.b_max))
    throw InvalidSpec("scan rectangle is degenerate");

  FieldGrid grid;
  grid.rect = rect;
  grid.step = step;
  grid.a_nodes = axis_nodes(rect.a_min, rect.a_max, step);
  grid.b_nodes = axis_nodes(rect.b_min, rect.b_max, step);
  grid.na = grid.a_nodes.size();
  grid.nb = grid.b_nodes.size();
  grid.values.assign(grid.na * grid.nb, 0.0);
  grid.evaluator_id = e.window().describe();

  const int n_workers = std::max(1, threads);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.na) return;
      for (std::size_t j = 0; j < grid.nb; ++j)
        grid.values[i * grid.nb + j] =
            eval_F(e, grid.a_nodes[i], grid.b_nodes[j], q).F;
    }
  };
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return grid;
}

std::vector<std::pair<std::size_t, std::size_t>> grid_local_maxima(
    const FieldGrid& grid, double threshold) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < grid.na; ++i) {
    for (std::size_t j = 0; j < grid.nb; ++j) {
      const double v = grid.at(i, j);
      if (!(v > threshold)) continue;
      bool strict = true;
      for (int di = -1; di <= 1 && strict; ++di) {
        for (int dj = -1; dj <= 1 && strict; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(grid.na) ||
              jj >= static_cast<std::ptrdiff_t>(grid.nb))
            continue;
          if (grid.at(ii, jj) >= v) strict = false;
        }
      }
      if (strict) out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

// One derivative-free refinement: 3x3 stencil values, quadratic
// least-squares fit, step to the fitted critical point when it improves,
// otherwise shrink. Never decreases the value.
Maximizer refine_seed(const ExtensionEvaluator& e, TFPoint p0, double v0,
                      double h0, const QuadratureSpec& q) {
  TFPoint p = p0;
  double v = v0;
  double h = h0;
  int iter = 0;
  while (iter < 200 && h >= 1e-6) {
    ++iter;
    double best_v = v;
    TFPoint best_p = p;
    Eigen::MatrixXd A(9, 6);
    Eigen::VectorXd rhs(9);
    int row = 0;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const TFPoint s{p.a + h * di, p.b + h * dj};
        const double fv =
            (di == 0 && dj == 0) ? v : eval_F(e, s.a, s.b, q).F;
        A(row, 0) = 1.0;
        A(row, 1) = di;
        A(row, 2) = dj;
        A(row, 3) = di * di;
        A(row, 4) = di * dj;
        A(row, 5) = dj * dj;
        rhs(row) = fv;
        ++row;
        if (fv > best_v) {
          best_v = fv;
          best_p = s;
        }
      }
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
    // critical point of the fitted quadratic, clamped to the stencil box
    const double det_h = 4.0 * c(3) * c(5) - c(4) * c(4);
    if (c(3) < 0.0 && det_h > 0.0) {
      const double dx = (-2.0 * c(5) * c(1) + c(4) * c(2)) / det_h;
      const double dy = (-2.0 * c(3) * c(2) + c(4) * c(1)) / det_h;
      const TFPoint cand{p.a + h * std::clamp(dx, -1.0, 1.0),
                         p.b + h * std::clamp(dy, -1.0, 1.0)};
      const double fv = eval_F(e, cand.a, cand.b, q).F;
      if (fv > best_v) {
        best_v = fv;
        best_p = cand;
      }
    }
    if (best_v > v) {
      const double moved = dist(best_p, p);
      p = best_p;
      v = best_v;
      if (moved < 0.5 * h) h *= 0.5;
    } else {
      h *= 0.5;
    }
  }
  return {p, v, true};
}

}  // namespace

std::vector<Maximizer> find_maximizers(const ExtensionEvaluator& e,
                                       const FieldGrid& grid, double delta,
                                       const QuadratureSpec& q,
                                       double cluster_tol, int threads) {
  const auto seeds = grid_local_maxima(grid, 1.0 - delta);
  std::vector<Maximizer> refined(seeds.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t s = next.fetch_add(1);
      if (s >= seeds.size()) return;
      const auto& [i, j] = seeds[s];
      refined[s] = refine_seed(e, {grid.a_nodes[i], grid.b_nodes[j]},
                               grid.at(i, j), grid.step, q);
    }
  };
  const int n_workers = std::max(1, threads);
  if (n_workers == 1 || seeds.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  // cluster within cluster_tol, highest value is the representative
  std::stable_sort(refined.begin(), refined.end(),
                   [](const Maximizer& a, const Maximizer& b) {
                     return a.value > b.value;
                   });
  std::vector<Maximizer> clusters;
  for (const Maximizer& m : refined) {
    bool joined = false;
    for (const Maximizer& c : clusters) {
      if (dist(m.location, c.location) <= cluster_tol) {
        joined = true;
        break;
      }
    }
    if (!joined) clusters.push_back(m);
  }
  return clusters;
}

double escape_radius(const ExtensionEvaluator& e, double delta,
                     const QuadratureSpec& q) {
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidSpec("escape_radius needs delta in (0,1)");
  const Window& w = e.window();
  if (!(w.vgg_decay_bound(1.0) < std::numeric_limits<double>::infinity()))
    throw TailBoundTooLarge("window has no certified STFT decay bound");

  const double rho = e.base_radius();
  const double target = 1.0 - delta;
  // Pointwise certified bound on F, used to skip quadrature where the
  // envelope already settles the comparison.
  auto cheap_bound = [&](double a, double b) {
    double worst = 0.0;
    for (const TFPoint& p : e.base().points)
      worst = std::max(worst, w.vgg_point_bound(a - p.a, b - p.b));
    return e.inv_abs_sum() * worst * worst;
  };
  auto circle_ok = [&](double R) {
    for (int i = 0; i < 720; ++i) {
      const double th = kTwoPi * i / 720.0;
      const double a = R * std::cos(th), b = R * std::sin(th);
      if (cheap_bound(a, b) < target) continue;
      if (eval_F(e, a, b, q).F >= target) return false;
    }
    return true;
  };
  auto beyond_ok = [&](double R) {
    const double d = w.vgg_decay_bound(R - rho);
    return e.inv_abs_sum() * d * d < target;
  };

  double hi = std::max(1.0, rho + 1.0);
  int guard = 0;
  while (!(beyond_ok(hi) && circle_ok(hi))) {
    hi *= 2.0;
    if (++guard > 40)
      throw TailBoundTooLarge("escape radius search did not converge");
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 30 && hi - lo > 1e-2; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (beyond_ok(mid) && circle_ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Certificate certify(const ExtensionEvaluator& e, const Rect& rect, double delta,
                    const QuadratureSpec& q, const CertifyOptions& opt,
                    FieldGrid* grid_out) {
  for (const TFPoint& p : e.base().points)
    if (!rect.contains(p))
      throw InvalidSpec("certify rectangle must contain all base points");

  Certificate cert;
  cert.base = e.base().points;
  cert.rect = rect;
  cert.delta = delta;
  cert.step = opt.step;
  cert.cluster_tol = opt.cluster_tol;
  cert.base_margin_tol = opt.base_margin_tol;
  cert.quad_abs_tol = q.abs_tol;
  cert.window_id = e.window().describe();
  cert.base_margin = e.base_min_eig();

  if (cert.base_margin < opt.base_margin_tol) {
    cert.verdict = CertVerdict::Inconclusive;
    cert.inconclusive_reason =
        "base Gramian margin " + std::to_string(cert.base_margin) +
        " below base_margin_tol; near-dependent base";
    return cert;
  }

  const FieldGrid grid = scan(e, rect, opt.step, q, opt.threads);
  cert.maximizer_clusters =
      find_maximizers(e, grid, delta, q, opt.cluster_tol, opt.threads);
  cert.escape_radius = escape_radius(e, delta, q);
  if (grid_out) *grid_out = grid;

  cert.verdict = CertVerdict::AllMaximaAtBase;
  for (const Maximizer& m : cert.maximizer_clusters) {
    double d = std::numeric_limits<double>::infinity();
    for (const TFPoint& p : cert.base) d = std::min(d, dist(m.location, p));
    if (d > opt.cluster_tol) {
      cert.verdict = CertVerdict::ExtraMaximaFound;
      cert.extra_locations.push_back(m.location);
    }
  }
  return cert;
}

}  // namespace hrtlab
