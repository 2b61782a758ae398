#include <cmath>
#include <complex>

#include "doctest.h"
#include "hrtlab/errors.hpp"
#include "hrtlab/stft.hpp"
#include "hrtlab/window.hpp"
#include "oracles.hpp"

using namespace hrtlab;
using oracle::frozen::rat_V01;
using oracle::frozen::rat_V10;
using oracle::frozen::rat_V1m1;
using oracle::frozen::texp_V01;
using oracle::frozen::texp_V10;
using oracle::frozen::texp_V1m1;

namespace {

const QuadratureSpec q{};  // defaults: abs_tol 1e-10

Window gaussian() { return make_window(WindowSpec::gaussian(), 1e-12); }
Window texp() { return make_window(WindowSpec::two_sided_exp(), 1e-12); }
Window rational() { return make_window(WindowSpec::rational_decay(), 1e-12); }

}  // namespace

TEST_CASE("V_gg(0,0) equals the squared norm") {
  for (const Window& w : {gaussian(), texp(), rational()}) {
    CAPTURE(w.describe());
    const Complex v = stft(w, w, 0.0, 0.0, q);
    CHECK(std::abs(v - Complex{1.0, 0.0}) < 1e-10);
  }
}

TEST_CASE("gaussian closed form values") {
  CHECK(std::abs(stft_gauss_closed(0.0, 0.0) - Complex{1.0, 0.0}) == 0.0);
  CHECK(std::abs(stft_gauss_closed(0.0, 1.0) -
                 Complex{oracle::frozen::stft_gauss_01, 0.0}) < 1e-15);
  CHECK(std::abs(stft_gauss_closed(1.0, 1.0) -
                 Complex{oracle::frozen::stft_gauss_11, 0.0}) < 1e-15);
  CHECK(std::abs(stft_gauss_closed(2.0, 0.0) -
                 Complex{oracle::frozen::stft_gauss_20, 0.0}) < 1e-15);
}

TEST_CASE("gaussian dispatch agrees with a brute-force oracle") {
  const Window g = gaussian();
  auto fg = [](double t) { return oracle::Complex{oracle::gauss_window(t), 0.0}; };
  for (const auto& [x, y] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {0.3, -0.7}}) {
    const Complex lib = stft(g, g, x, y, q);
    const oracle::Complex ref = oracle::stft_brute(fg, fg, x, y, 7.0, 256);
    CHECK(std::abs(lib - Complex{ref.real(), ref.imag()}) < 1e-9);
  }
}

TEST_CASE("quadrature path matches the gaussian closed form on a 9-point grid") {
  // hermite degree 0 windows take the quadrature path but represent the
  // same function as the gaussian kind
  const Window h0 = make_window(WindowSpec::hermite({1.0}), 1e-12);
  REQUIRE(h0.kind() == WindowKind::HermiteGaussian);
  for (double x : {-2.0, 0.0, 2.0})
    for (double y : {-2.0, 0.0, 2.0}) {
      CAPTURE(x);
      CAPTURE(y);
      CHECK(std::abs(stft(h0, h0, x, y, q) - stft_gauss_closed(x, y)) < 1e-10);
    }
}

TEST_CASE("two-sided exponential values against frozen oracles") {
  const Window w = texp();
  CHECK(std::abs(stft(w, w, 0.0, 1.0, q) - Complex{texp_V01, 0.0}) < 1e-10);
  CHECK(std::abs(stft(w, w, 1.0, 0.0, q) - Complex{texp_V10, 0.0}) < 1e-10);
  CHECK(std::abs(stft(w, w, 1.0, -1.0, q) - Complex{texp_V1m1, 0.0}) < 1e-10);
  CHECK(std::abs(stft(w, w, 0.5, 0.7, q) -
                 Complex{oracle::frozen::texp_V_05_07_re,
                         oracle::frozen::texp_V_05_07_im}) < 1e-10);
}

TEST_CASE("rational-decay values against frozen oracles (analytic tails)") {
  const Window w = rational();
  CHECK(std::abs(stft(w, w, 0.0, 1.0, q) - Complex{rat_V01, 0.0}) < 1e-10);
  CHECK(std::abs(stft(w, w, 1.0, 0.0, q) - Complex{rat_V10, 0.0}) < 1e-10);
  CHECK(std::abs(stft(w, w, 1.0, -1.0, q) - Complex{rat_V1m1, 0.0}) < 1e-10);
  CHECK(std::abs(stft(w, w, 0.5, 0.7, q) -
                 Complex{oracle::frozen::rat_V_05_07_re,
                         oracle::frozen::rat_V_05_07_im}) < 1e-10);
}

TEST_CASE("cauchy-schwarz bound |V_gg| <= 1 + tol") {
  for (const Window& w : {gaussian(), texp(), rational()}) {
    for (double x : {-1.5, 0.0, 0.4})
      for (double y : {-0.8, 0.3, 2.0})
        CHECK(std::abs(stft(w, w, x, y, q)) <= 1.0 + q.abs_tol);
  }
}

TEST_CASE("far-field decay of V_gg") {
  const Window g = gaussian();
  const Window t = texp();
  const double far = 3.0 * (g.l2_tail_radius(1e-6) + t.l2_tail_radius(1e-6));
  for (double sgn : {-1.0, 1.0}) {
    CHECK(std::abs(stft(g, g, sgn * far, 0.0, q)) < 10.0 * q.abs_tol);
    CHECK(std::abs(stft(g, g, 0.0, sgn * far, q)) < 10.0 * q.abs_tol);
    CHECK(std::abs(stft(t, t, sgn * far, sgn * far, q)) < 10.0 * q.abs_tol);
  }
}

TEST_CASE("conjugate symmetry in y for real windows at x = 0") {
  for (const Window& w : {gaussian(), texp(), rational()}) {
    for (double y : {0.3, 1.1, 2.6}) {
      const Complex a = stft(w, w, 0.0, -y, q);
      const Complex b = std::conj(stft(w, w, 0.0, y, q));
      CHECK(std::abs(a - b) < 2.0 * q.abs_tol);
    }
  }
}

TEST_CASE("covariance identity residuals") {
  const Window g = gaussian();
  SUBCASE("identity transform") {
    CHECK(covariance_residual(g, g, 0.0, 0.0, 0.4, -0.2, q) <= 2.0 * q.abs_tol);
  }
  SUBCASE("gaussian at the spec point") {
    CHECK(covariance_residual(g, g, 1.0, 1.0, 0.3, -0.7, q) <= 2.0 * q.abs_tol);
  }
  SUBCASE("two-sided exponential") {
    const Window t = texp();
    CHECK(covariance_residual(t, t, 0.5, -1.0, 0.8, 0.6, q) <= 2.0 * q.abs_tol);
  }
  SUBCASE("sampled window") {
    std::vector<Complex> vals;
    for (int k = 0; k <= 240; ++k)
      vals.emplace_back(oracle::gauss_window(-6.0 + 0.05 * k), 0.0);
    const Window s = make_window(WindowSpec::sampled(-6.0, 0.05, vals), 1e-10);
    CHECK(covariance_residual(s, s, 0.7, 0.3, -0.2, 0.45, q) <= 2.0 * q.abs_tol);
  }
}

TEST_CASE("orthogonality relation residuals") {
  const Window g = gaussian();
  SUBCASE("all gaussian: inner-product target 1") {
    CHECK(orthogonality_residual(g, g, g, g, 6.0, q) <= 1e-6);
  }
  SUBCASE("orthogonal odd/even pair") {
    const Window odd = make_window(WindowSpec::hermite({0.0, 1.0}), 1e-12);
    CHECK(std::abs(detail::inner_product(g, odd, q)) < 1e-10);
    CHECK(orthogonality_residual(g, odd, g, g, 6.0, q) <= 1e-6);
  }
  SUBCASE("gaussian vs two-sided exponential at L = 8") {
    const Window t = texp();
    CHECK(orthogonality_residual(g, t, g, t, 8.0, q) <= 1e-5);
  }
}

TEST_CASE("fourier transform of STFT products") {
  const Window g = gaussian();
  SUBCASE("at the origin") {
    CHECK(ft_product_residual(g, g, g, g, 0.0, 0.0, 6.0, q) <= 1e-5);
  }
  SUBCASE("at (1,-1)") {
    CHECK(ft_product_residual(g, g, g, g, 1.0, -1.0, 6.0, q) <= 1e-5);
  }
  SUBCASE("at (0.5,0.25)") {
    CHECK(ft_product_residual(g, g, g, g, 0.5, 0.25, 6.0, q) <= 1e-5);
  }
}

TEST_CASE("quadrature failure propagates") {
  QuadratureSpec tiny;
  tiny.abs_tol = 1e-14;
  tiny.max_panels = 16;
  const Window t = texp();
  CHECK_THROWS_AS(stft(t, t, 0.3, 5.0, tiny), QuadratureFailure);
}
