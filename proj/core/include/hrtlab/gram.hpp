#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hrtlab/configuration.hpp"
#include "hrtlab/types.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

/// Gramian of the Gabor system over (g, Lambda): Hermitian, unit diagonal
/// up to quadrature error, positive semidefinite up to quadrature error.
struct HermitianGram {
  Eigen::MatrixXcd entries;
  std::string window_id;
  std::vector<TFPoint> points;
  double build_tol = 1e-10;

  Eigen::Index size() const { return entries.rows(); }
};

struct IndependenceVerdict {
  enum class Status { Independent, Dependent, Inconclusive };
  Status status = Status::Inconclusive;
  /// min_eig for Independent (the margin), unused otherwise.
  double margin = 0.0;
  /// Normalized null vector (first nonzero coordinate real positive) for
  /// Dependent verdicts.
  Eigen::VectorXcd null_coeffs;
  double min_eig = 0.0;
  double tol = 0.0;
};

/// Entry (k, l) = e^{-2 pi i a_k (b_l - b_k)} V_g g(a_l - a_k, b_l - b_k),
/// computed for l >= k and reflected to enforce Hermitian symmetry.
HermitianGram gram_matrix(const Window& g, const Configuration& lambda,
                          const QuadratureSpec& q);

/// Smallest eigenvalue by a self-adjoint eigensolve.
double min_eigenvalue(const HermitianGram& G);

/// Numerical linear-independence verdict: Independent when min_eig > tol,
/// Dependent below tol/10 (with a canonical null vector), Inconclusive in
/// the gray band [tol/10, tol].
IndependenceVerdict independence_test(const Window& g, const Configuration& lambda,
                                      double tol, const QuadratureSpec& q);

/// Autocorrelation Phi(x) = \int g(t) conj(g(t-x)) dt, the Fourier
/// transform of |ghat|^2 evaluated in the time domain.
Complex bochner_phi(const Window& g, double x, const QuadratureSpec& q);

struct CollinearGramCheck {
  double residual = 0.0;
  int phi_sign = +1;  // orientation chosen by the probe shifts
};

/// Max entrywise deviation between the Gramian of pure translates
/// {(a_k, 0)} and the matrix (Phi(sign * (a_k - a_l))), with the
/// orientation fixed by matching Phi against V_g g at 3 probe shifts.
CollinearGramCheck collinear_gram_check(const Window& g,
                                        const std::vector<double>& shifts,
                                        const QuadratureSpec& q);

double collinear_gram_residual(const Window& g, const std::vector<double>& shifts,
                               const QuadratureSpec& q);

}  // namespace hrtlab
