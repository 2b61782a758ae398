#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hrtlab/types.hpp"

namespace hrtlab {

enum class WindowKind { Gaussian, HermiteGaussian, TwoSidedExp, RationalDecay, Sampled };

/// Description of a generator function before normalization.
///
///   Gaussian          2^{1/4} e^{-pi (t/s)^2}
///   HermiteGaussian   (sum_k coeffs[k] H_k(sqrt(2 pi) t/s)) e^{-pi (t/s)^2},
///                     H_k the physicists' Hermite polynomials,
///                     degree = coeffs.size() - 1
///   TwoSidedExp       e^{-|t|/s}
///   RationalDecay     2^{-1/2} / (1 + |t|/s)
///   Sampled           piecewise-cubic interpolation of `values` on the
///                     uniform grid grid_start + k*grid_step, 0 outside
///
/// s = scale (default 1).
struct WindowSpec {
  WindowKind kind = WindowKind::Gaussian;
  double scale = 1.0;
  int degree = 0;
  std::vector<double> coeffs;
  double grid_start = 0.0;
  double grid_step = 0.0;
  std::vector<Complex> values;

  static WindowSpec gaussian(double scale = 1.0);
  static WindowSpec hermite(std::vector<double> coeffs, double scale = 1.0);
  static WindowSpec two_sided_exp(double scale = 1.0);
  static WindowSpec rational_decay(double scale = 1.0);
  static WindowSpec sampled(double grid_start, double grid_step,
                            std::vector<Complex> values);
};

/// An immutable unit-L2-norm generator with the decay metadata used to
/// truncate integrals. Construct with make_window; safe for concurrent
/// reads.
class Window {
 public:
  const WindowSpec& spec() const { return spec_; }
  WindowKind kind() const { return spec_.kind; }
  double scale() const { return spec_.scale; }
  double norm_factor() const { return norm_factor_; }
  double support_radius() const { return support_radius_; }
  double trunc_tol() const { return trunc_tol_; }
  bool is_real() const { return is_real_; }

  /// norm_factor * raw(t); zero outside the grid for Sampled windows.
  Complex operator()(double t) const;

  /// Certified bound on \int_{|t|>T} |g|^2.
  double l2_tail(double T) const;

  /// Smallest radius T with l2_tail(T) <= tail; used for pairwise
  /// truncation of STFT integrals. Unbounded growth for RationalDecay --
  /// callers treat heavy_tail() windows via analytic tail corrections
  /// instead.
  double l2_tail_radius(double tail) const;

  /// True when truncation radii from l2_tail are impractically large and
  /// STFT integrals need the analytic tail path (RationalDecay).
  bool heavy_tail() const { return spec_.kind == WindowKind::RationalDecay; }

  /// Points where the function is not smooth, for quadrature panel
  /// splitting (kink at 0, sample knots, support edges).
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Certified bound on \int |g(t) g(t-s)| dt, decreasing in |s|.
  double autocorr_bound(double s) const;

  /// Certified coefficient c with |V_g g(x,y)| <= c / y^2; infinity when
  /// no such bound is available.
  double osc_decay_coef() const { return osc_decay_coef_; }

  /// Certified bound on sup_{|(x,y)| >= r} |V_g g(x, y)|, decreasing in r.
  double vgg_decay_bound(double r) const;

  /// Certified pointwise bound on |V_g g(x, y)| from the autocorrelation
  /// and oscillation envelopes (1.0 where nothing sharper is certified).
  double vgg_point_bound(double x, double y) const;

  /// Certified bound on \iint_{|(a,b)| >= r} |V_g g|^2 da db; infinity
  /// when the pointwise envelope is not square-integrable (RationalDecay).
  double vgg_tail_mass(double r) const;

  /// Short identifier for provenance records, e.g. "gaussian(scale=1)".
  std::string describe() const;

 private:
  friend Window make_window(const WindowSpec& spec, double trunc_tol);

  Complex eval_raw(double t) const;

  WindowSpec spec_;
  double trunc_tol_ = 1e-12;
  double norm_factor_ = 1.0;
  double support_radius_ = 1.0;
  bool is_real_ = true;
  std::vector<double> breakpoints_;
  // decay metadata (all certified bounds on the normalized function)
  double sup_bound_ = 1.0;       // ||g||_inf
  double env_gauss_coef_ = 0.0;  // c with |g(t)| <= c e^{-pi t^2 / (2 s^2)}
  double osc_decay_coef_ = 0.0;  // |V_gg(x,y)| <= coef / y^2
};

/// Normalizes the described function to unit L2 norm and precomputes the
/// truncation metadata. The norm is evaluated with adaptive quadrature at
/// absolute tolerance trunc_tol/10 (plus exact tail terms for slowly
/// decaying kinds), so the represented function satisfies
/// | ||g||_2 - 1 | <= 1e-10 under the module's quadrature.
///
/// Throws ZeroWindow when the computed norm is below 1e-14 and
/// InvalidSpec for malformed grids or coefficient lists.
Window make_window(const WindowSpec& spec, double trunc_tol = 1e-12);

/// norm_factor * raw(t), as a free function.
Complex eval_window(const Window& w, double t);

}  // namespace hrtlab
