#include "hrtlab/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrtlab/errors.hpp"
#include "hrtlab/quadrature.hpp"

namespace hrtlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hermite_sum(const std::vector<double>& c, double x) {
  // sum_k c[k] H_k(x) with the physicists' recurrence.
  double h0 = 1.0, h1 = 2.0 * x;
  double acc = c[0] * h0;
  if (c.size() > 1) acc += c[1] * h1;
  for (std::size_t k = 2; k < c.size(); ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * (k - 1.0) * h0;
    h0 = h1;
    h1 = h2;
    acc += c[k] * h1;
  }
  return acc;
}

double hermite_sum_d1(const std::vector<double>& c, double x) {
  // d/dx sum_k c[k] H_k(x) = sum_k c[k] 2k H_{k-1}(x)
  std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
  if (c.size() == 1) return 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = 2.0 * k * c[k];
  return hermite_sum(d, x);
}

// 4-point (or lower-order near short grids) Lagrange interpolation on a
// uniform grid.
Complex sampled_eval(const WindowSpec& s, double t) {
  const std::size_t n = s.values.size();
  const double h = s.grid_step;
  const double end = s.grid_start + h * (n - 1);
  if (t < s.grid_start || t > end) return {0.0, 0.0};
  if (n < 4) {
    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) {
      double w = 1.0;
      const double xm = s.grid_start + h * m;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == m) continue;
        const double xl = s.grid_start + h * l;
        w *= (t - xl) / (xm - xl);
      }
      acc += w * s.values[m];
    }
    return acc;
  }
  auto i = static_cast<std::ptrdiff_t>(std::floor((t - s.grid_start) / h));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 2);
  const std::ptrdiff_t j0 =
      std::clamp<std::ptrdiff_t>(i - 1, 0, static_cast<std::ptrdiff_t>(n) - 4);
  const double v = (t - (s.grid_start + h * j0)) / h;  // in [0, 3]
  Complex acc{0.0, 0.0};
  for (int m = 0; m < 4; ++m) {
    double w = 1.0;
    for (int l = 0; l < 4; ++l)
      if (l != m) w *= (v - l) / (m - l);
    acc += w * s.values[j0 + m];
  }
  return acc;
}

}  // namespace

WindowSpec WindowSpec::gaussian(double scale) {
  WindowSpec s;
  s.kind = WindowKind::Gaussian;
  s.scale = scale;
  return s;
}

WindowSpec WindowSpec::hermite(std::vector<double> coeffs, double scale) {
  WindowSpec s;
  s.kind = WindowKind::HermiteGaussian;
  s.scale = scale;
  s.degree = coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1;
  s.coeffs = std::move(coeffs);
  return s;
}

WindowSpec WindowSpec::two_sided_exp(double scale) {
  WindowSpec s;
  s.kind = WindowKind::TwoSidedExp;
  s.scale = scale;
  return s;
}

WindowSpec WindowSpec::rational_decay(double scale) {
  WindowSpec s;
  s.kind = WindowKind::RationalDecay;
  s.scale = scale;
  return s;
}

WindowSpec WindowSpec::sampled(double grid_start, double grid_step,
                               std::vector<Complex> values) {
  WindowSpec s;
  s.kind = WindowKind::Sampled;
  s.grid_start = grid_start;
  s.grid_step = grid_step;
  s.values = std::move(values);
  return s;
}

Complex Window::eval_raw(double t) const {
  const double s = spec_.scale;
  switch (spec_.kind) {
    case WindowKind::Gaussian: {
      const double u = t / s;
      return {std::pow(2.0, 0.25) * std::exp(-kPi * u * u), 0.0};
    }
    case WindowKind::HermiteGaussian: {
      const double u = t / s;
      return {hermite_sum(spec_.coeffs, std::sqrt(kTwoPi) * u) *
                  std::exp(-kPi * u * u),
              0.0};
    }
    case WindowKind::TwoSidedExp:
      return {std::exp(-std::abs(t) / s), 0.0};
    case WindowKind::RationalDecay:
      return {1.0 / std::sqrt(2.0) / (1.0 + std::abs(t) / s), 0.0};
    case WindowKind::Sampled:
      return sampled_eval(spec_, t);
  }
  return {0.0, 0.0};
}

Complex Window::operator()(double t) const { return norm_factor_ * eval_raw(t); }

Complex eval_window(const Window& w, double t) { return w(t); }

double Window::l2_tail(double T) const {
  if (T <= 0.0) return 1.0;
  const double s = spec_.scale;
  const double nf2 = norm_factor_ * norm_factor_;
  switch (spec_.kind) {
    case WindowKind::Gaussian:
      return nf2 * s * std::erfc(std::sqrt(kTwoPi) * T / s);
    case WindowKind::HermiteGaussian:
      return env_gauss_coef_ * env_gauss_coef_ * s * std::erfc(std::sqrt(kPi) * T / s);
    case WindowKind::TwoSidedExp:
      return nf2 * s * std::exp(-2.0 * T / s);
    case WindowKind::RationalDecay:
      return nf2 * s * s / (s + T);
    case WindowKind::Sampled: {
      const double edge = std::max(std::abs(spec_.grid_start),
                                   std::abs(spec_.grid_start +
                                            spec_.grid_step * (spec_.values.size() - 1)));
      return T >= edge ? 0.0 : 1.0;
    }
  }
  return 0.0;
}

double Window::l2_tail_radius(double tail) const {
  if (spec_.kind == WindowKind::Sampled) {
    return std::max(std::abs(spec_.grid_start),
                    std::abs(spec_.grid_start +
                             spec_.grid_step * (spec_.values.size() - 1)));
  }
  double lo = 0.0, hi = spec_.scale;
  while (l2_tail(hi) > tail) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) return hi;
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (l2_tail(mid) > tail ? lo : hi) = mid;
  }
  return hi;
}

double Window::autocorr_bound(double sft) const {
  const double s = spec_.scale;
  const double u = std::abs(sft) / s;
  switch (spec_.kind) {
    case WindowKind::Gaussian:
      return std::exp(-kPi * sft * sft / (2.0 * s * s));
    case WindowKind::HermiteGaussian:
      return std::min(1.0, env_gauss_coef_ * env_gauss_coef_ * s *
                               std::exp(-kPi * u * u / 4.0));
    case WindowKind::TwoSidedExp:
      return std::exp(-u) * (1.0 + u);
    case WindowKind::RationalDecay:
      return u < 1e-12 ? 1.0 : std::log1p(u) * (1.0 / u + 1.0 / (u + 2.0));
    case WindowKind::Sampled: {
      const double span = spec_.grid_step * (spec_.values.size() - 1);
      return std::abs(sft) >= span ? 0.0 : 1.0;
    }
  }
  return 1.0;
}

double Window::vgg_point_bound(double x, double y) const {
  if (spec_.kind == WindowKind::Gaussian) {
    const double s2 = spec_.scale * spec_.scale;
    return std::exp(-0.5 * kPi * (x * x / s2 + s2 * y * y));
  }
  double b = autocorr_bound(std::abs(x));
  if (osc_decay_coef_ < kInf && y != 0.0)
    b = std::min(b, osc_decay_coef_ / (y * y));
  return std::min(1.0, b);
}

double Window::vgg_decay_bound(double r) const {
  if (r <= 0.0) return 1.0;
  if (spec_.kind == WindowKind::Gaussian) {
    const double s2 = spec_.scale * spec_.scale;
    const double m = std::min(1.0 / s2, s2);
    return std::exp(-0.5 * kPi * m * r * r);
  }
  if (!(osc_decay_coef_ < kInf)) return kInf;
  const double half = r / std::sqrt(2.0);
  const double y_part = osc_decay_coef_ / (half * half);
  return std::min(1.0, std::max(autocorr_bound(half), y_part));
}

double Window::vgg_tail_mass(double r) const {
  if (spec_.kind == WindowKind::Gaussian) {
    const double s2 = spec_.scale * spec_.scale;
    const double m = std::min(1.0 / s2, s2);
    return std::exp(-kPi * m * r * r) / m;
  }
  if (spec_.kind == WindowKind::RationalDecay ||
      spec_.kind == WindowKind::Sampled || !(osc_decay_coef_ < kInf))
    return kInf;  // pointwise envelope not certifiably square-integrable
  // 2 pi \int_r^\infty D(u)^2 u du with D(u) = vgg_decay_bound(u),
  // integrated octave by octave (the domain spans several decades before
  // the analytic 1/u^4 remainder takes over).
  double far = std::max(r, spec_.scale);
  while (vgg_decay_bound(far) > 1e-12 && far < 1e9) far *= 2.0;
  auto integrand = [&](double u) {
    const double d = vgg_decay_bound(u);
    return Complex{kTwoPi * d * d * u, 0.0};
  };
  double mass = 0.0;
  for (double a = r; a < far;) {
    const double b = std::min(far, 2.0 * std::max(a, 0.5 * spec_.scale));
    mass += integrate_interval(integrand, a, b, 1e-10, 4000).value.real();
    a = b;
  }
  const double c2 = osc_decay_coef_;
  const double remainder = kPi * (2.0 * c2) * (2.0 * c2) / (far * far);
  return mass + remainder;
}

std::string Window::describe() const {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  switch (spec_.kind) {
    case WindowKind::Gaussian:
      return "gaussian(scale=" + num(spec_.scale) + ")";
    case WindowKind::HermiteGaussian:
      return "hermite(degree=" + std::to_string(spec_.degree) +
             ",scale=" + num(spec_.scale) + ")";
    case WindowKind::TwoSidedExp:
      return "twosidedexp(scale=" + num(spec_.scale) + ")";
    case WindowKind::RationalDecay:
      return "rationaldecay(scale=" + num(spec_.scale) + ")";
    case WindowKind::Sampled:
      return "sampled(n=" + std::to_string(spec_.values.size()) +
             ",start=" + num(spec_.grid_start) + ",step=" + num(spec_.grid_step) + ")";
  }
  return "window";
}

namespace {

void validate_spec(const WindowSpec& spec) {
  if (!(spec.scale > 0.0) || !std::isfinite(spec.scale))
    throw InvalidSpec("window scale must be positive and finite");
  if (spec.kind == WindowKind::HermiteGaussian) {
    if (spec.coeffs.empty())
      throw InvalidSpec("HermiteGaussian needs a non-empty coefficient list");
    if (std::all_of(spec.coeffs.begin(), spec.coeffs.end(),
                    [](double c) { return c == 0.0; }))
      throw InvalidSpec("HermiteGaussian coefficients are all zero");
    if (spec.degree != static_cast<int>(spec.coeffs.size()) - 1)
      throw InvalidSpec("HermiteGaussian degree does not match coefficient count");
  }
  if (spec.kind == WindowKind::Sampled) {
    if (spec.values.size() < 2)
      throw InvalidSpec("sampled grid needs at least 2 points");
    if (!(spec.grid_step > 0.0) || !std::isfinite(spec.grid_step) ||
        !std::isfinite(spec.grid_start))
      throw InvalidSpec("sampled grid must be uniform with positive step");
    for (const Complex& v : spec.values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw InvalidSpec("sampled values must be finite");
  }
}

// Integration radius covering the raw function's mass up to ~1e-20,
// used for the normalization quadrature; slow tails are added in closed
// form on top.
double norm_quad_radius(const WindowSpec& spec) {
  switch (spec.kind) {
    case WindowKind::Gaussian:
      return 5.0 * spec.scale;
    case WindowKind::HermiteGaussian:
      return (6.0 + spec.degree) * spec.scale;
    case WindowKind::TwoSidedExp:
      return 24.0 * spec.scale;
    case WindowKind::RationalDecay:
      return 64.0 * spec.scale;
    case WindowKind::Sampled:
      return 0.0;  // unused
  }
  return 0.0;
}

}  // namespace

Window make_window(const WindowSpec& spec, double trunc_tol) {
  if (!(trunc_tol > 0.0)) throw InvalidSpec("trunc_tol must be positive");
  validate_spec(spec);

  Window w;
  w.spec_ = spec;
  w.trunc_tol_ = trunc_tol;

  // breakpoints of the raw function
  switch (spec.kind) {
    case WindowKind::TwoSidedExp:
    case WindowKind::RationalDecay:
      w.breakpoints_ = {0.0};
      break;
    case WindowKind::Sampled: {
      w.breakpoints_.reserve(spec.values.size());
      for (std::size_t k = 0; k < spec.values.size(); ++k)
        w.breakpoints_.push_back(spec.grid_start + spec.grid_step * k);
      break;
    }
    default:
      break;
  }

  // L2 norm of the raw function: adaptive quadrature at trunc_tol/10 plus
  // exact tails for the slowly decaying kinds.
  const double norm_tol = trunc_tol / 10.0;
  double lo, hi;
  if (spec.kind == WindowKind::Sampled) {
    lo = spec.grid_start;
    hi = spec.grid_start + spec.grid_step * (spec.values.size() - 1);
  } else {
    hi = norm_quad_radius(spec);
    lo = -hi;
  }
  auto edges = make_edges(lo, hi, w.breakpoints_);
  auto nq = integrate_segments(
      [&](double t) {
        const Complex v = w.eval_raw(t);
        return Complex{std::norm(v), 0.0};
      },
      edges, 0.0, norm_tol, 1 << 18, 1.0);
  double norm_sq = nq.value.real();
  const double s = spec.scale;
  if (spec.kind == WindowKind::TwoSidedExp)
    norm_sq += s * std::exp(-2.0 * hi / s);
  if (spec.kind == WindowKind::RationalDecay) norm_sq += s * s / (s + hi);

  if (!(norm_sq > 1e-28)) throw ZeroWindow("window has (numerically) zero L2 norm");
  w.norm_factor_ = 1.0 / std::sqrt(norm_sq);

  // realness
  switch (spec.kind) {
    case WindowKind::Sampled: {
      w.is_real_ = std::all_of(spec.values.begin(), spec.values.end(),
                               [](const Complex& v) {
                                 return std::abs(v.imag()) <= 1e-14;
                               });
      break;
    }
    default:
      w.is_real_ = true;
      break;
  }

  // decay metadata on the normalized function
  const double nf = w.norm_factor_;
  switch (spec.kind) {
    case WindowKind::Gaussian: {
      w.env_gauss_coef_ = nf * std::pow(2.0, 0.25);
      // sup_y y^2 |V_gg(x,y)|; the exact gaussian branch of the bounds
      // supersedes this
      w.osc_decay_coef_ = 2.0 / (kPi * std::exp(1.0) * s * s);
      break;
    }
    case WindowKind::HermiteGaussian: {
      // envelope |g(t)| <= c e^{-pi t^2/(2 s^2)} via a dense scan of
      // |p(u)| e^{-pi u^2/2}, then the uniform TV-based 1/y^2 coefficient
      // from quadratures of |g'| and |g''|.
      const double U = 8.0 + spec.degree;
      double env = 0.0, sup = 0.0, dsup = 0.0;
      const int n_scan = 8192;
      for (int i = 0; i <= n_scan; ++i) {
        const double u = -U + 2.0 * U * i / n_scan;
        const double p = std::abs(hermite_sum(spec.coeffs, std::sqrt(kTwoPi) * u));
        env = std::max(env, p * std::exp(-kPi * u * u / 2.0));
        const double g = p * std::exp(-kPi * u * u);
        sup = std::max(sup, g);
        const double dp =
            std::abs(std::sqrt(kTwoPi) *
                         hermite_sum_d1(spec.coeffs, std::sqrt(kTwoPi) * u) -
                     kTwoPi * u * hermite_sum(spec.coeffs, std::sqrt(kTwoPi) * u)) *
            std::exp(-kPi * u * u);
        dsup = std::max(dsup, dp);
      }
      w.env_gauss_coef_ = 1.05 * nf * env;
      const double S = 1.02 * nf * sup;
      const double Dinf = 1.05 * nf * dsup / s;
      auto d1_abs = [&](double t) {
        const double u = t / s;
        const double x = std::sqrt(kTwoPi) * u;
        const double d =
            (std::sqrt(kTwoPi) * hermite_sum_d1(spec.coeffs, x) -
             kTwoPi * u * hermite_sum(spec.coeffs, x)) *
            std::exp(-kPi * u * u);
        return Complex{std::abs(d) * nf / s, 0.0};
      };
      auto d2_abs = [&](double t) {
        const double u = t / s;
        const double x = std::sqrt(kTwoPi) * u;
        const double p = hermite_sum(spec.coeffs, x);
        const double p1 = std::sqrt(kTwoPi) * hermite_sum_d1(spec.coeffs, x);
        // second derivative of p(u(x)) e^{-pi u^2} in u
        std::vector<double> dd(spec.coeffs.size(), 0.0);
        for (std::size_t k = 2; k < spec.coeffs.size(); ++k)
          dd[k - 2] = 4.0 * k * (k - 1.0) * spec.coeffs[k];
        const double p2 = kTwoPi * hermite_sum(dd, x);
        const double val =
            (p2 - kTwoPi * p - 4.0 * kPi * u * p1 + 4.0 * kPi * kPi * u * u * p) *
            std::exp(-kPi * u * u);
        return Complex{std::abs(val) * nf / (s * s), 0.0};
      };
      const double R = (6.0 + spec.degree) * s;
      const double D1 = 1.02 * integrate_interval(d1_abs, -R, R, 1e-12, 65536).value.real();
      const double A = 1.02 * integrate_interval(d2_abs, -R, R, 1e-12, 65536).value.real();
      w.osc_decay_coef_ = 2.0 * (A * S + Dinf * D1) / (kTwoPi * kTwoPi);
      break;
    }
    case WindowKind::TwoSidedExp: {
      // jump of g' at 0 plus the smooth parts of the product rule
      const double nf2 = nf * nf;
      w.osc_decay_coef_ = 12.0 * nf2 / s / (kTwoPi * kTwoPi);
      break;
    }
    case WindowKind::RationalDecay: {
      const double nf2 = nf * nf;
      w.osc_decay_coef_ = 6.0 * nf2 / s / (kTwoPi * kTwoPi);
      break;
    }
    case WindowKind::Sampled:
      w.osc_decay_coef_ = kInf;
      break;
  }

  w.support_radius_ = w.l2_tail_radius(trunc_tol);
  if (!(w.support_radius_ > 0.0)) w.support_radius_ = spec.grid_step;
  return w;
}

}  // namespace hrtlab
