#pragma once

#include <complex>
#include <memory>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "hrtlab/configuration.hpp"
#include "hrtlab/gram.hpp"
#include "hrtlab/types.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

/// F(a, b) evaluated together with the extension vector and the linear
/// solve's residual.
struct ExtensionValue {
  double F = 0.0;
  Eigen::VectorXcd u;
  double solve_residual = 0.0;
};

/// Factorized base Gramian G_N of (g, Lambda) with the cached quantities
/// needed by the extension function F(a,b) = <G_N^{-1} u(a,b), u(a,b)>.
/// Immutable after construction; eval_F and fhat are pure and safe to
/// call concurrently.
class ExtensionEvaluator {
 public:
  const Window& window() const { return window_; }
  const Configuration& base() const { return base_; }
  const HermitianGram& gram() const { return gram_; }
  double det_base() const { return det_base_; }
  /// sum_{k,l} |B_{k,l}| with B = G_N^{-1}.
  double inv_abs_sum() const { return inv_abs_sum_; }
  const Eigen::MatrixXcd& inverse() const { return inverse_; }
  double base_min_eig() const { return base_min_eig_; }
  /// max |lambda_k| over the base points.
  double base_radius() const { return base_radius_; }
  /// || L L^* - G ||_max of the stored factorization.
  double refactor_error() const { return refactor_error_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
    return llt_.solve(rhs);
  }

  /// V_g g(x, y), memoized when the quadrature spec matches the build
  /// spec. The cache only short-circuits bit-identical arguments, so
  /// results are unchanged by it.
  Complex vgg(double x, double y, const QuadratureSpec& q) const;

 private:
  friend ExtensionEvaluator build_extension(const Window& g,
                                            const Configuration& lambda,
                                            const QuadratureSpec& q);
  Window window_;
  Configuration base_;
  HermitianGram gram_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
  Eigen::MatrixXcd inverse_;
  double det_base_ = 0.0;
  double inv_abs_sum_ = 0.0;
  double base_min_eig_ = 0.0;
  double base_radius_ = 0.0;
  double refactor_error_ = 0.0;
  QuadratureSpec build_q_;
  struct VggCache;
  std::shared_ptr<VggCache> cache_;
};

/// Cholesky-factorizes the base Gramian and caches det G_N, G_N^{-1} and
/// sum |B_{k,l}|. Throws SingularBase when the Hermitian factorization
/// fails, i.e. the base system is numerically dependent.
ExtensionEvaluator build_extension(const Window& g, const Configuration& lambda,
                                   const QuadratureSpec& q);

/// u_N(a,b): component k = e^{-2 pi i a_k (b - b_k)} V_g g(a - a_k, b - b_k).
Eigen::VectorXcd extension_vector(const ExtensionEvaluator& e, double a,
                                  double b, const QuadratureSpec& q);

/// F(a,b) = <G_N^{-1} u, u> via the factorized solve. The value is the
/// real part of a Hermitian form; the imaginary part is checked against
/// the 1e-11 guard.
ExtensionValue eval_F(const ExtensionEvaluator& e, double a, double b,
                      const QuadratureSpec& q);

/// | det G_{N+1} - (1 - F(a,b)) det G_N | with G_{N+1} built independently
/// through gram_matrix on Lambda + {(a,b)}.
double det_identity_residual(const ExtensionEvaluator& e, double a, double b,
                             const QuadratureSpec& q);

struct IntegralEstimate {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t nodes = 0;
};

/// Midpoint tensor quadrature of F over [-L, L]^2 plus the certified
/// decay-tail bound. Throws TailBoundTooLarge when the window's decay
/// metadata cannot certify the tail below 1e-6 (RationalDecay, Sampled).
IntegralEstimate integral_F(const ExtensionEvaluator& e, double L, double step,
                            const QuadratureSpec& q, int threads = 1);

/// Fourier transform of F by the explicit double sum over B_{k,l} and
/// V_g g factors.
Complex fhat(const ExtensionEvaluator& e, double xi, double eta,
             const QuadratureSpec& q);

/// Symmetry checks of F for real windows over the base {(0,0),(0,1)}:
/// |F(a,b) - F(a,1-b)| for b != 1/2 (a integer), |F(-a,1/2) - F(a,1/2)|
/// for b = 1/2. Throws NotApplicable when the preconditions fail.
double symmetry_residual(const ExtensionEvaluator& e, double a, double b,
                         const QuadratureSpec& q);

}  // namespace hrtlab
