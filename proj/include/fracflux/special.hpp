#pragma once

#include <complex>

namespace fracflux {

/// Modified Bessel function K_0(z) for Re z > 0: power series for |z| <= 4,
/// trapezoid rule on int_0^inf exp(-z cosh u) du up to |z| = 17, Hankel
/// asymptotic expansion beyond.
std::complex<double> besselK0(std::complex<double> z);

}  // namespace fracflux
