#include "hrtlab/stft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hrtlab/errors.hpp"
#include "hrtlab/expint.hpp"
#include "hrtlab/quadrature.hpp"

namespace hrtlab {

namespace {

Complex cis(double theta) { return {std::cos(theta), std::sin(theta)}; }

// \int_T^infty e^{-2 pi i y t} / (t + c) dt for y != 0, T + c > 0.
Complex tail_over_linear(double T, double c, double y) {
  const double yy = std::abs(y);
  const Complex z{0.0, kTwoPi * yy * (T + c)};
  const Complex v = cis(kTwoPi * yy * c) * expint_e1(z);
  return y > 0.0 ? v : std::conj(v);
}

// \int_T^infty e^{-2 pi i y t} / ((t + c1)(t + c2)) dt, T + c_i > 0.
Complex tail_over_quadratic(double T, double c1, double c2, double y) {
  const double dc = c1 - c2;
  if (y == 0.0) {
    if (std::abs(dc) < 1e-4 * (1.0 + std::abs(c1)))
      return Complex{1.0 / (T + 0.5 * (c1 + c2)), 0.0};
    return Complex{std::log((T + c1) / (T + c2)) / dc, 0.0};
  }
  if (std::abs(dc) < 1e-4 * (1.0 + std::abs(c1))) {
    // double pole at the midpoint; relative error O(dc^2 / (T+c)^2)
    const double c = 0.5 * (c1 + c2);
    return cis(-kTwoPi * y * T) / (T + c) -
           Complex{0.0, kTwoPi * y} * tail_over_linear(T, c, y);
  }
  return (tail_over_linear(T, c2, y) - tail_over_linear(T, c1, y)) / dc;
}

// Smallest T with sqrt(tail_f(T - |dx|/2) * tail_g(T - |dx|/2)) <= tol:
// outside the radius-T interval around the pair's midpoint, both windows
// (centered dx apart) are at least T - |dx|/2 from their centers, so this
// is the Cauchy-Schwarz bound for the product's neglected mass.
double pair_radius(const Window& f, const Window& g, double dx, double tol) {
  const double half = 0.5 * std::abs(dx);
  auto ok = [&](double T) {
    return std::sqrt(f.l2_tail(T - half) * g.l2_tail(T - half)) <= tol;
  };
  double hi = std::max(1.0, half);
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 1e18) return hi;
  }
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<double> clipped_breakpoints(const Window& f, const Window& g,
                                        double sa, double x, double lo,
                                        double hi) {
  std::vector<double> interior;
  for (double b : f.breakpoints()) interior.push_back(b + sa);
  for (double b : g.breakpoints()) interior.push_back(b + x);
  interior.erase(std::remove_if(interior.begin(), interior.end(),
                                [&](double t) { return t <= lo || t >= hi; }),
                 interior.end());
  return interior;
}

}  // namespace

namespace detail {

Complex shifted_stft(const Window& f, const Window& g, double sa, double mb,
                     double x, double y, const QuadratureSpec& q) {
  if (!q.valid()) throw InvalidSpec("invalid QuadratureSpec");
  // e^{2 pi i mb (t-sa)} e^{-2 pi i y t} = e^{-2 pi i mb sa} e^{-2 pi i (y-mb) t}
  const double yy = y - mb;
  const Complex phase0 = cis(-kTwoPi * mb * sa);
  const double tail_budget = q.abs_tol / 10.0;

  double lo = 0.0, hi = 0.0;
  Complex tails{0.0, 0.0};
  const bool heavy = f.heavy_tail() && g.heavy_tail();
  if (heavy) {
    const double sf = f.scale(), sg = g.scale();
    const double Tc = 6.0 * std::max(sf, sg);
    lo = std::min(sa, x) - Tc;
    hi = std::max(sa, x) + Tc;
    const double K = f.norm_factor() * g.norm_factor() * sf * sg / 2.0;
    tails += K * tail_over_quadratic(hi, sf - sa, sg - x, yy);
    tails += K * tail_over_quadratic(-lo, sf + sa, sg + x, -yy);
  } else {
    // Combine the pairwise Cauchy-Schwarz radius (centered between the
    // two windows) with each light window's own support radius; the
    // neglected mass is below tail_budget split three ways.
    const double each = tail_budget / 3.0;
    const double mid = 0.5 * (sa + x);
    const double Tp = pair_radius(f, g, x - sa, each);
    lo = mid - Tp;
    hi = mid + Tp;
    if (!f.heavy_tail()) {
      const double Tf = f.l2_tail_radius(each * each);
      lo = std::max(lo, sa - Tf);
      hi = std::min(hi, sa + Tf);
    }
    if (!g.heavy_tail()) {
      const double Tg = g.l2_tail_radius(each * each);
      lo = std::max(lo, x - Tg);
      hi = std::min(hi, x + Tg);
    }
    if (!(lo < hi)) return {0.0, 0.0};
  }

  const auto edges = make_edges(lo, hi, clipped_breakpoints(f, g, sa, x, lo, hi));
  auto core = integrate_segments(
      [&](double t) {
        return f(t - sa) * std::conj(g(t - x)) * cis(-kTwoPi * yy * t);
      },
      edges, std::abs(yy), q.abs_tol / 2.0, q.max_panels, q.oscillation_guard);
  return phase0 * (core.value + tails);
}

Complex inner_product(const Window& f, const Window& g,
                      const QuadratureSpec& q) {
  return shifted_stft(f, g, 0.0, 0.0, 0.0, 0.0, q);
}

}  // namespace detail

Complex stft_gauss_closed(double x, double y) {
  return cis(-kPi * x * y) * std::exp(-0.5 * kPi * (x * x + y * y));
}

Complex stft(const Window& f, const Window& g, double x, double y,
             const QuadratureSpec& q) {
  if (f.kind() == WindowKind::Gaussian && g.kind() == WindowKind::Gaussian &&
      f.scale() == 1.0 && g.scale() == 1.0) {
    return f.norm_factor() * g.norm_factor() * stft_gauss_closed(x, y);
  }
  return detail::shifted_stft(f, g, 0.0, 0.0, x, y, q);
}

double covariance_residual(const Window& f, const Window& g, double a,
                           double b, double x, double y,
                           const QuadratureSpec& q) {
  const Complex lhs = detail::shifted_stft(f, g, a, b, x, y, q);
  const Complex rhs = cis(-kTwoPi * a * y) * stft(f, g, x - a, y - b, q);
  return std::abs(lhs - rhs);
}

namespace {

struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Axis gl_axis(double lo, double hi, double osc_freq, double max_width,
             const std::vector<double>& breaks, int n_gl) {
  const GaussLegendreRule& rule = GaussLegendreRule::of(n_gl);
  double width = max_width;
  if (osc_freq > 0.0) width = std::min(width, 1.0 / (2.0 * osc_freq));
  const auto edges = make_edges(lo, hi, breaks);
  Axis ax;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double len = edges[s + 1] - edges[s];
    const int n = std::max(1, static_cast<int>(std::ceil(len / width)));
    for (int k = 0; k < n; ++k) {
      const double a = edges[s] + len * k / n;
      const double b = edges[s] + len * (k + 1) / n;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        ax.nodes.push_back(mid + half * rule.nodes[i]);
        ax.weights.push_back(half * rule.weights[i]);
      }
    }
  }
  return ax;
}

// Sample V_g f over the tensor grid; reuses nothing across fields but
// dispatches per point, so Gaussian pairs stay cheap.
std::vector<Complex> sample_field(const Window& f, const Window& g,
                                  const Axis& ax, const Axis& ay,
                                  const QuadratureSpec& q) {
  std::vector<Complex> vals(ax.nodes.size() * ay.nodes.size());
  for (std::size_t i = 0; i < ax.nodes.size(); ++i)
    for (std::size_t j = 0; j < ay.nodes.size(); ++j)
      vals[i * ay.nodes.size() + j] = stft(f, g, ax.nodes[i], ay.nodes[j], q);
  return vals;
}

}  // namespace

double orthogonality_residual(const Window& f1, const Window& f2,
                              const Window& g1, const Window& g2, double L,
                              const QuadratureSpec& q) {
  const std::vector<double> zero{0.0};
  const Axis ax = gl_axis(-L, L, 0.0, 1.0, zero, 10);
  const Axis ay = gl_axis(-L, L, 0.0, 1.0, zero, 10);
  const auto v1 = sample_field(f1, g1, ax, ay, q);
  const bool same = (&f1 == &f2) && (&g1 == &g2);
  const auto v2 = same ? v1 : sample_field(f2, g2, ax, ay, q);
  Complex integral{0.0, 0.0};
  for (std::size_t i = 0; i < ax.nodes.size(); ++i)
    for (std::size_t j = 0; j < ay.nodes.size(); ++j)
      integral += ax.weights[i] * ay.weights[j] *
                  v1[i * ay.nodes.size() + j] *
                  std::conj(v2[i * ay.nodes.size() + j]);
  const Complex target = detail::inner_product(f1, f2, q) *
                         std::conj(detail::inner_product(g1, g2, q));
  return std::abs(integral - target);
}

double ft_product_residual(const Window& f1, const Window& f2,
                           const Window& g1, const Window& g2, double xi,
                           double eta, double L, const QuadratureSpec& q) {
  const std::vector<double> zero{0.0};
  const Axis ax = gl_axis(-L, L, std::abs(xi), 1.0, zero, 10);
  const Axis ay = gl_axis(-L, L, std::abs(eta), 1.0, zero, 10);
  const auto v1 = sample_field(f1, g1, ax, ay, q);
  const bool same = (&f1 == &f2) && (&g1 == &g2);
  const auto v2 = same ? v1 : sample_field(f2, g2, ax, ay, q);
  Complex lhs{0.0, 0.0};
  for (std::size_t i = 0; i < ax.nodes.size(); ++i)
    for (std::size_t j = 0; j < ay.nodes.size(); ++j)
      lhs += ax.weights[i] * ay.weights[j] * v1[i * ay.nodes.size() + j] *
             std::conj(v2[i * ay.nodes.size() + j]) *
             cis(-kTwoPi * (ax.nodes[i] * xi + ay.nodes[j] * eta));
  const Complex rhs = stft(f1, f2, -eta, xi, q) * std::conj(stft(g1, g2, -eta, xi, q));
  return std::abs(lhs - rhs);
}

}  // namespace hrtlab
