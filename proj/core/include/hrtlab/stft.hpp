#pragma once

#include <complex>

#include "hrtlab/types.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

/// Short-time Fourier transform V_g f(x, y) = \int f(t) conj(g(t-x))
/// e^{-2 pi i y t} dt, within q.abs_tol. Dispatches to the closed form
/// when both windows are plain unit-scale Gaussians; otherwise adaptive
/// quadrature over the pair-truncated interval, with analytic tail
/// corrections when both windows decay only rationally.
Complex stft(const Window& f, const Window& g, double x, double y,
             const QuadratureSpec& q);

/// V_g g for the unit-norm Gaussian: e^{-pi i x y} e^{-pi x^2/2}
/// e^{-pi y^2/2}, exactly.
Complex stft_gauss_closed(double x, double y);

/// |V_g(T_a M_b f)(x, y) - e^{-2 pi i a y} V_g f(x-a, y-b)|, both sides
/// by independent quadratures.
double covariance_residual(const Window& f, const Window& g, double a,
                           double b, double x, double y,
                           const QuadratureSpec& q);

/// | \iint_{[-L,L]^2} V_{g1}f1 conj(V_{g2}f2) - <f1,f2> conj(<g1,g2>) |
/// with tensor Gauss-Legendre quadrature over the rectangle.
double orthogonality_residual(const Window& f1, const Window& f2,
                              const Window& g1, const Window& g2, double L,
                              const QuadratureSpec& q);

/// | F_2(V_{g1}f1 conj(V_{g2}f2))(xi, eta)
///   - (V_{f2}f1 conj(V_{g2}g1))(-eta, xi) |
/// with the 2-D Fourier transform on the left computed by truncated
/// tensor quadrature over [-L, L]^2.
double ft_product_residual(const Window& f1, const Window& f2,
                           const Window& g1, const Window& g2, double xi,
                           double eta, double L, const QuadratureSpec& q);

namespace detail {

/// \int f(t - sa) e^{2 pi i mb (t - sa)} conj(g(t - x)) e^{-2 pi i y t} dt:
/// the workhorse behind stft (sa = mb = 0) and the covariance check.
Complex shifted_stft(const Window& f, const Window& g, double sa, double mb,
                     double x, double y, const QuadratureSpec& q);

/// L2 inner product <f, g> by quadrature (used by the orthogonality
/// residual's right-hand side).
Complex inner_product(const Window& f, const Window& g,
                      const QuadratureSpec& q);

}  // namespace detail

}  // namespace hrtlab
