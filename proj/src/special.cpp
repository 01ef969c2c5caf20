#include "fracflux/special.hpp"

#include <cmath>
#include <numbers>

#include "fracflux/error.hpp"

namespace fracflux {

namespace {

using C = std::complex<double>;

C k0Series(C z) {
    const C q = 0.25 * z * z;
    C term = 1.0;
    C i0 = 1.0;
    C rest = 0.0;
    double harmonic = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= q / static_cast<double>(k * k);
        harmonic += 1.0 / k;
        i0 += term;
        rest += term * harmonic;
        if (std::abs(term) * harmonic < 1e-18 * std::abs(rest)) break;
    }
    return -(std::log(0.5 * z) + std::numbers::egamma) * i0 + rest;
}

C k0Integral(C z) {
    const double re = z.real();
    const double upper = std::acosh(std::max(1.0, 45.0 / re));
    const double h = 0.02;
    const int n = static_cast<int>(std::ceil(upper / h));
    C sum = 0.5 * std::exp(-z);
    for (int k = 1; k <= n; ++k) sum += std::exp(-z * std::cosh(k * h));
    return h * sum;
}

C k0Asymptotic(C z) {
    C sum = 1.0;
    C term = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        const C next = term * (-(odd * odd)) / (8.0 * k * z);
        if (std::abs(next) > prev) break;
        term = next;
        prev = std::abs(term);
        sum += term;
        if (prev < 1e-17) break;
    }
    return std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z) * sum;
}

}  // namespace

std::complex<double> besselK0(std::complex<double> z) {
    require(z.real() > 0.0, ErrorCode::Domain, "besselK0 needs Re z > 0");
    const double a = std::abs(z);
    if (a <= 4.0) return k0Series(z);
    if (a <= 17.0) return k0Integral(z);
    return k0Asymptotic(z);
}

}  // namespace fracflux
