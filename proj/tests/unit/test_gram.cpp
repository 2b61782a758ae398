#include <cmath>

#include "doctest.h"
#include "hrtlab/errors.hpp"
#include "hrtlab/gram.hpp"
#include "hrtlab/stft.hpp"
#include "oracles.hpp"

using namespace hrtlab;

namespace {

const QuadratureSpec q{};

Window gaussian() { return make_window(WindowSpec::gaussian(), 1e-12); }
Window texp() { return make_window(WindowSpec::two_sided_exp(), 1e-12); }

Configuration pts(std::vector<TFPoint> p) { return validate(p, 1e-9); }

}  // namespace

TEST_CASE("gaussian 2x2 gram matches the closed form") {
  const HermitianGram G = gram_matrix(gaussian(), pts({{0, 0}, {0, 1}}), q);
  const double alpha = std::exp(-kPi / 2.0);
  CHECK(std::abs(G.entries(0, 0) - Complex{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(G.entries(0, 1) - Complex{alpha, 0.0}) < 1e-12);
  CHECK(std::abs(G.entries(1, 0) - Complex{alpha, 0.0}) < 1e-12);
  CHECK(std::abs(G.entries.determinant().real() - (1.0 - std::exp(-kPi))) <
        1e-12);
}

TEST_CASE("single point gives the 1x1 identity") {
  const HermitianGram G = gram_matrix(texp(), pts({{0.7, -2.1}}), q);
  REQUIRE(G.size() == 1);
  CHECK(std::abs(G.entries(0, 0) - Complex{1.0, 0.0}) < 1e-10);
}

TEST_CASE("gram invariants across windows and configurations") {
  const std::vector<TFPoint> lam{{0, 0}, {0, 1}, {1, 0}, {0.5, -0.7}};
  for (const Window& w : {gaussian(), texp()}) {
    const HermitianGram G = gram_matrix(w, pts(lam), q);
    CAPTURE(w.describe());
    // hermitian by construction
    CHECK((G.entries - G.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    // unit diagonal within 10 * build_tol
    for (Eigen::Index k = 0; k < G.size(); ++k)
      CHECK(std::abs(G.entries(k, k) - Complex{1.0, 0.0}) <= 10.0 * q.abs_tol);
    // off-diagonal moduli bounded by Cauchy-Schwarz
    for (Eigen::Index k = 0; k < G.size(); ++k)
      for (Eigen::Index l = 0; l < G.size(); ++l)
        CHECK(std::abs(G.entries(k, l)) <= 1.0 + 10.0 * q.abs_tol);
    // PSD up to quadrature error
    CHECK(min_eigenvalue(G) >= -10.0 * q.abs_tol);
    // determinant equals the eigenvalue product
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G.entries);
    const double prod = es.eigenvalues().prod();
    CHECK(std::abs(G.entries.determinant().real() - prod) <=
          1e-10 * std::max(1.0, std::abs(prod)));
  }
}

TEST_CASE("min_eigenvalue on closed-form cases") {
  HermitianGram I3;
  I3.entries = Eigen::MatrixXcd::Identity(3, 3);
  CHECK(min_eigenvalue(I3) == doctest::Approx(1.0).epsilon(1e-14));

  const double alpha = std::exp(-kPi / 2.0);
  HermitianGram G2;
  G2.entries.resize(2, 2);
  G2.entries << 1.0, alpha, alpha, 1.0;
  // eigenvalues 1 +- alpha
  CHECK(min_eigenvalue(G2) ==
        doctest::Approx(1.0 - alpha).epsilon(1e-13));

  // duplicated point: rank-deficient
  HermitianGram dup;
  dup.entries.resize(2, 2);
  dup.entries << 1.0, 1.0, 1.0, 1.0;
  CHECK(min_eigenvalue(dup) <= 1e-12);
}

TEST_CASE("independence verdicts") {
  SUBCASE("gaussian on the figure-4 base") {
    const auto v = independence_test(gaussian(), pts({{0, 0}, {0, 1}, {1, 0}}),
                                     1e-8, q);
    CHECK(v.status == IndependenceVerdict::Status::Independent);
    CHECK(v.margin == doctest::Approx(oracle::frozen::G3_min_eig).epsilon(1e-9));
  }
  SUBCASE("two-sided exponential on the same base") {
    const auto v = independence_test(texp(), pts({{0, 0}, {0, 1}, {1, 0}}),
                                     1e-8, q);
    CHECK(v.status == IndependenceVerdict::Status::Independent);
    CHECK(v.margin ==
          doctest::Approx(oracle::frozen::texp_G3_min_eig).epsilon(1e-8));
  }
  SUBCASE("duplicated point forced through a raw configuration") {
    Configuration dup;  // bypasses validate
    dup.points = {{0, 0}, {0, 1}, {0, 0}};
    dup.geom_tol = 1e-9;
    const auto v = independence_test(gaussian(), dup, 1e-8, q);
    CHECK(v.status == IndependenceVerdict::Status::Dependent);
    REQUIRE(v.null_coeffs.size() == 3);
    // canonical null vector (e_0 - e_2)/sqrt(2): first coordinate real positive
    CHECK(v.null_coeffs(0).real() > 0.0);
    CHECK(std::abs(v.null_coeffs(0).imag()) < 1e-12);
    CHECK(std::abs(v.null_coeffs(0) + v.null_coeffs(2)) < 1e-9);
    CHECK(std::abs(v.null_coeffs(1)) < 1e-9);
    // ||G v|| <= tol ||v||
    CHECK((gram_matrix(gaussian(), dup, q).entries * v.null_coeffs).norm() <=
          1e-8);
  }
  SUBCASE("verdict is invariant under permutations") {
    const auto v1 = independence_test(gaussian(), pts({{0, 0}, {0, 1}, {1, 0}}),
                                      1e-8, q);
    const auto v2 = independence_test(gaussian(), pts({{1, 0}, {0, 0}, {0, 1}}),
                                      1e-8, q);
    CHECK(v1.status == v2.status);
    CHECK(v1.margin == doctest::Approx(v2.margin).epsilon(1e-10));
  }
}

TEST_CASE("bochner autocorrelation") {
  const Window g = gaussian();
  CHECK(std::abs(bochner_phi(g, 0.0, q) - Complex{1.0, 0.0}) < 1e-12);
  // Phi(1) = V_gg(1, 0) = e^{-pi/2}
  CHECK(std::abs(bochner_phi(g, 1.0, q) - stft_gauss_closed(1.0, 0.0)) < 1e-12);
  const Window t = texp();
  CHECK(std::abs(bochner_phi(t, 1.0, q) -
                 Complex{oracle::frozen::texp_V10, 0.0}) < 1e-10);
  for (double x : {-2.0, -0.5, 0.3, 1.7})
    CHECK(std::abs(bochner_phi(t, x, q)) <= 1.0 + q.abs_tol);
}

TEST_CASE("collinear gram identity") {
  SUBCASE("single shift is exact") {
    CHECK(collinear_gram_residual(gaussian(), {0.0}, q) < 1e-12);
  }
  SUBCASE("gaussian shifts") {
    const auto chk = collinear_gram_check(gaussian(), {0.0, 1.0, 2.0}, q);
    CHECK(chk.residual <= 10.0 * q.abs_tol);
    CHECK(chk.phi_sign == 1);
  }
  SUBCASE("two-sided exponential shifts") {
    CHECK(collinear_gram_residual(texp(), {0.0, 0.5, 1.5}, q) <=
          10.0 * q.abs_tol);
  }
  SUBCASE("collinear independence holds at desk scale") {
    const auto v = independence_test(
        gaussian(), pts({{0, 0}, {0.5, 0}, {1.5, 0}, {2.0, 0}}), 1e-8, q);
    CHECK(v.status == IndependenceVerdict::Status::Independent);
    CHECK(v.margin > 1e-8);
  }
}
