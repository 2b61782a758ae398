#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "hrtlab/types.hpp"

namespace hrtlab {

/// An ordered finite set of pairwise-distinct time-frequency points.
struct Configuration {
  std::vector<TFPoint> points;
  double geom_tol = 1e-9;

  std::size_t size() const { return points.size(); }
};

/// Affine area-preserving map p -> linear * p + shift with det(linear) = 1.
struct SymplecticMap {
  std::array<std::array<double, 2>, 2> linear{{{1.0, 0.0}, {0.0, 1.0}}};
  std::array<double, 2> shift{0.0, 0.0};

  TFPoint operator()(const TFPoint& p) const {
    return {linear[0][0] * p.a + linear[0][1] * p.b + shift[0],
            linear[1][0] * p.a + linear[1][1] * p.b + shift[1]};
  }
  double det() const {
    return linear[0][0] * linear[1][1] - linear[0][1] * linear[1][0];
  }
  SymplecticMap inverse() const;
};

enum class ConfigKind { Collinear, NMConfig, General };

/// Geometry of a configuration: all on one line, covered by two distinct
/// parallel lines with n <= m points, or neither.
struct Classification {
  ConfigKind kind = ConfigKind::General;
  int n = 0;
  int m = 0;
  std::vector<std::size_t> line1;  // indices of the n-point line
  std::vector<std::size_t> line2;  // indices of the m-point line
  /// Witness line parameters: unit direction (angle in [0, pi)) and the
  /// two signed offsets.
  double direction_angle = 0.0;
  double offset1 = 0.0;
  double offset2 = 0.0;
};

/// Checks pairwise distinctness (distance > geom_tol). Throws
/// DuplicatePoint naming the offending pair.
Configuration validate(const std::vector<TFPoint>& points,
                       double geom_tol = 1e-9);

/// Collinear if one line covers everything within geom_tol (convention:
/// N <= 2 is Collinear); otherwise the two-parallel-line cover with the
/// deterministic tie-break (maximal m, then smallest direction angle in
/// [0, pi)); otherwise General.
Classification classify(const Configuration& c);

/// Normal form of a 3-point configuration: first point to (0,0), second
/// to (0,1); the third point's image is the free parameter (a, b).
/// Throws DegenerateConfig when the first two points coincide.
std::pair<SymplecticMap, Configuration> normalize_three(const Configuration& c);

/// Normal form of a (1,n) configuration: the n-point line goes to the
/// horizontal axis with the first-listed on-line point at the origin, the
/// off-line point to (0,1). Throws NotOneN when classify(c) is not a
/// (1,n) configuration.
std::pair<SymplecticMap, Configuration> normalize_1n(const Configuration& c);

/// Pointwise image, order preserved.
Configuration apply_map(const SymplecticMap& m, const Configuration& c);

}  // namespace hrtlab
