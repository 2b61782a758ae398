#include "hrtlab/expint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrtlab {

namespace {

constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

std::complex<double> e1_series(std::complex<double> z) {
  // E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
  std::complex<double> sum = 0.0;
  std::complex<double> term = 1.0;
  for (int k = 1; k <= 64; ++k) {
    term *= -z / static_cast<double>(k);
    std::complex<double> add = term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

std::complex<double> e1_continued_fraction(std::complex<double> z) {
  // E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...)))),
  // evaluated with the modified Lentz algorithm.
  const double tiny = 1e-300;
  std::complex<double> b = z + 1.0;
  std::complex<double> c = 1.0 / tiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

}  // namespace

std::complex<double> expint_e1(std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0))
    throw std::domain_error("expint_e1: z = 0");
  // The continued fraction converges slowly near the negative real axis;
  // the imaginary-axis and right-half-plane arguments used here are fine.
  if (std::abs(z) <= 2.5) return e1_series(z);
  return e1_continued_fraction(z);
}

}  // namespace hrtlab
