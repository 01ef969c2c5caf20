#pragma once

#include <complex>
#include <functional>

namespace fracflux {

using LaplaceTransform = std::function<std::complex<double>(std::complex<double> s)>;

struct InversionResult {
    double value = 0.0;
    /// |f_N - f_{3N/4}|, the change when a quarter of the nodes is dropped.
    double errorEstimate = 0.0;
};

/// Real inverse Laplace transform f(t) of F, which must be analytic off the
/// negative real axis and decay as |s| grows there. Midpoint rule on the
/// parabolic contour s = (N / t)(0.1309 - 0.1194 th^2 + 0.25 i th), th in
/// [-pi, pi] (Weideman and Trefethen).
InversionResult invertLaplace(const LaplaceTransform& F, double t, int nodes = 64);

/// Parabola real part at the height of `s`; poles of F right of this line
/// are not captured by the contour and need their residues added.
bool rightOfContour(std::complex<double> s, double t, int nodes = 64);

}  // namespace fracflux
