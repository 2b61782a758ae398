#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hrtlab/errors.hpp"
#include "hrtlab/types.hpp"

namespace hrtlab {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1],
/// computed once by Newton iteration on P_n.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendreRule& of(int n);
};

struct QuadOutcome {
  Complex value{0.0, 0.0};
  double err_estimate = 0.0;
  int panels_used = 0;
};

namespace detail {

template <class Fn>
Complex gl_panel(Fn&& f, const GaussLegendreRule& rule, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

}  // namespace detail

/// Adaptive complex-valued integration of f over the union of segments
/// [edges[0], edges[1]], ..., [edges[m-1], edges[m]].
///
/// Each segment is first cut so that one oscillation period of
/// e^{-2 pi i y t} (|y| = osc_freq) receives at least `oscillation_guard`
/// panels, then panels are bisected until the two-level Gauss-Legendre
/// error estimate meets the per-length share of abs_tol. Throws
/// QuadratureFailure when the panel budget runs out first.
template <class Fn>
QuadOutcome integrate_segments(Fn&& f, const std::vector<double>& edges,
                               double osc_freq, double abs_tol, int max_panels,
                               double oscillation_guard) {
  QuadOutcome out;
  if (edges.size() < 2) return out;
  const GaussLegendreRule& rule = GaussLegendreRule::of(15);

  const double total_len = edges.back() - edges.front();
  if (!(total_len > 0.0)) return out;

  struct Panel {
    double lo, hi;
    Complex coarse;
  };
  std::vector<Panel> stack;

  // The budget counts panels created: the oscillation-guard seeding plus
  // two per adaptive split.
  int used = 0;
  auto charge = [&](int n) {
    used += n;
    if (used > max_panels)
      throw QuadratureFailure("quadrature panel budget exhausted (" +
                              std::to_string(max_panels) + " panels)");
  };

  const double max_width =
      osc_freq > 0.0 ? 1.0 / (oscillation_guard * osc_freq)
                     : std::numeric_limits<double>::infinity();

  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const double len = hi - lo;
    if (!(len > 0.0)) continue;
    const int n0 = static_cast<int>(std::min<long long>(
        max_panels,
        std::max<long long>(1,
                            static_cast<long long>(std::ceil(len / max_width)))));
    charge(n0);
    for (int k = 0; k < n0; ++k) {
      const double a = lo + len * k / n0;
      const double b = (k + 1 == n0) ? hi : lo + len * (k + 1) / n0;
      stack.push_back({a, b, detail::gl_panel(f, rule, a, b)});
    }
  }

  const double min_width = total_len * 1e-13;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const Complex left = detail::gl_panel(f, rule, p.lo, mid);
    const Complex right = detail::gl_panel(f, rule, mid, p.hi);
    const Complex fine = left + right;
    const double err = std::abs(fine - p.coarse);
    const double share = abs_tol * (p.hi - p.lo) / total_len;
    if (err <= share || (p.hi - p.lo) < min_width) {
      out.value += fine;
      out.err_estimate += err;
    } else {
      charge(2);
      stack.push_back({p.lo, mid, left});
      stack.push_back({mid, p.hi, right});
    }
  }
  out.panels_used = used;
  return out;
}

/// Convenience wrapper for a single interval without oscillation handling.
template <class Fn>
QuadOutcome integrate_interval(Fn&& f, double lo, double hi, double abs_tol,
                               int max_panels = 4096) {
  std::vector<double> edges{lo, hi};
  return integrate_segments(std::forward<Fn>(f), edges, 0.0, abs_tol,
                            max_panels, 1.0);
}

/// Sorted, deduplicated edge list for integrate_segments: [lo, hi] plus
/// any interior breakpoints.
std::vector<double> make_edges(double lo, double hi,
                               const std::vector<double>& interior);

}  // namespace hrtlab
