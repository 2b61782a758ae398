#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hrtlab/extension.hpp"
#include "hrtlab/types.hpp"

namespace hrtlab {

struct Rect {
  double a_min = 0.0, a_max = 0.0, b_min = 0.0, b_max = 0.0;

  bool contains(const TFPoint& p) const {
    return p.a >= a_min && p.a <= a_max && p.b >= b_min && p.b <= b_max;
  }
};

/// F sampled on the rectangle's node grid, row-major over (a_i, b_j):
/// values[i * nb + j] = F(a_i, b_j). Nodes are a_min + k*step up to
/// a_max; a_max joins as a final node when the step does not divide the
/// extent (degenerate 2x2 corner grid when step exceeds the extent).
struct FieldGrid {
  Rect rect;
  double step = 0.0;
  std::size_t na = 0, nb = 0;
  std::vector<double> a_nodes;
  std::vector<double> b_nodes;
  std::vector<double> values;
  std::string evaluator_id;

  double at(std::size_t i, std::size_t j) const { return values[i * nb + j]; }
};

struct Maximizer {
  TFPoint location;
  double value = 0.0;
  bool refined = false;
};

enum class CertVerdict { AllMaximaAtBase, ExtraMaximaFound, Inconclusive };

struct Certificate {
  std::vector<TFPoint> base;
  Rect rect;
  double delta = 0.0;
  double step = 0.0;
  std::vector<Maximizer> maximizer_clusters;
  double escape_radius = 0.0;
  CertVerdict verdict = CertVerdict::Inconclusive;
  std::vector<TFPoint> extra_locations;
  // tolerances used
  double cluster_tol = 1e-4;
  double base_margin_tol = 1e-4;
  double quad_abs_tol = 0.0;
  double base_margin = 0.0;
  std::string window_id;
  std::string inconclusive_reason;
};

struct CertifyOptions {
  double step = 0.05;
  int threads = 1;
  double cluster_tol = 1e-4;
  /// Base Gramians with min eigenvalue below this margin yield an
  /// Inconclusive verdict instead of a silent pass.
  double base_margin_tol = 1e-4;
};

/// Samples F on the grid; rows are distributed across threads and written
/// to disjoint indices, so the result is bit-identical for any thread
/// count.
FieldGrid scan(const ExtensionEvaluator& e, const Rect& rect, double step,
               const QuadratureSpec& q, int threads = 1);

/// Strict 8-neighbor grid-local maxima with value > threshold.
std::vector<std::pair<std::size_t, std::size_t>> grid_local_maxima(
    const FieldGrid& grid, double threshold);

/// Grid-local maxima above 1 - delta, refined by derivative-free ascent
/// (quadratic stencil fit with shrinking steps, monotone in the value),
/// clustered within cluster_tol. Seeds refine independently across
/// threads; the clustering order is fixed, so results do not depend on
/// the thread count.
std::vector<Maximizer> find_maximizers(const ExtensionEvaluator& e,
                                       const FieldGrid& grid, double delta,
                                       const QuadratureSpec& q,
                                       double cluster_tol = 1e-4,
                                       int threads = 1);

/// Smallest radius (doubling then bisection) whose 720-point circle keeps
/// F below 1 - delta, with the window's decay bound certifying all larger
/// radii. Throws TailBoundTooLarge for windows without certified decay.
double escape_radius(const ExtensionEvaluator& e, double delta,
                     const QuadratureSpec& q);

/// scan + find_maximizers + escape_radius; AllMaximaAtBase iff every
/// refined cluster lies within cluster_tol of a base point. Bases whose
/// Gramian margin is below base_margin_tol are reported Inconclusive.
/// grid_out, when given, receives the scanned field (empty for
/// Inconclusive verdicts, which skip the scan).
Certificate certify(const ExtensionEvaluator& e, const Rect& rect, double delta,
                    const QuadratureSpec& q, const CertifyOptions& opt = {},
                    FieldGrid* grid_out = nullptr);

}  // namespace hrtlab
