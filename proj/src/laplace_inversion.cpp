#include "fracflux/laplace_inversion.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fracflux/error.hpp"
#include "fracflux/field.hpp"

namespace fracflux {

namespace {

double contourSum(const LaplaceTransform& F, double t, int nodes) {
    using C = std::complex<double>;
    const double n = nodes;
    const double h = 2.0 * std::numbers::pi / n;
    std::vector<C> terms;
    terms.reserve(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        const double th = -std::numbers::pi + (k + 0.5) * h;
        const C z = n * C(0.1309 - 0.1194 * th * th, 0.25 * th);
        const C dz = n * C(-0.2388 * th, 0.25);
        terms.push_back(std::exp(z) * F(z / t) * dz);
    }
    return (pairwiseSum(std::span<const C>(terms)) / C(0.0, n * t)).real();
}

}  // namespace

InversionResult invertLaplace(const LaplaceTransform& F, double t, int nodes) {
    require(t > 0.0, ErrorCode::Domain, "Laplace inversion needs t > 0");
    require(nodes >= 8, ErrorCode::Precondition, "Laplace inversion needs at least 8 nodes");
    InversionResult r;
    r.value = contourSum(F, t, nodes);
    r.errorEstimate = std::abs(r.value - contourSum(F, t, (3 * nodes) / 4));
    return r;
}

bool rightOfContour(std::complex<double> s, double t, int nodes) {
    const double n = nodes;
    const double th = s.imag() * t / (0.25 * n);
    return s.real() * t > n * (0.1309 - 0.1194 * th * th);
}

}  // namespace fracflux
