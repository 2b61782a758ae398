#pragma once

#include <complex>

namespace hrtlab {

/// Exponential integral E1(z) = \int_z^\infty e^{-t}/t dt for complex z
/// off the branch cut (-inf, 0]. Power series for small |z|, modified
/// Lentz continued fraction otherwise. Used for the analytic tails of
/// STFT integrals of slowly decaying windows, where z is purely
/// imaginary.
std::complex<double> expint_e1(std::complex<double> z);

}  // namespace hrtlab
