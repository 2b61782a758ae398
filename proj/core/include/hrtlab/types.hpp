#pragma once

#include <cmath>
#include <complex>

namespace hrtlab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point (a, b) of the time-frequency plane: time shift a, frequency
/// shift b.
struct TFPoint {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const TFPoint&, const TFPoint&) = default;
};

inline double norm2(const TFPoint& p) { return std::hypot(p.a, p.b); }
inline double dist(const TFPoint& p, const TFPoint& q) {
  return std::hypot(p.a - q.a, p.b - q.b);
}

/// Controls for the adaptive one-dimensional quadrature used by the STFT
/// and everything built on it. Tolerances are absolute: STFT values near
/// zero are the common case.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_panels = 4096;
  /// Minimum number of panels per oscillation period of e^{-2 pi i y t}.
  /// One 15-point panel per period is already accurate to ~1e-9 before
  /// any adaptive bisection.
  double oscillation_guard = 1.0;

  bool valid() const {
    return abs_tol > 0.0 && max_panels >= 16 && oscillation_guard > 0.0;
  }
};

}  // namespace hrtlab
