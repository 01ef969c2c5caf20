#pragma once

#include <cstddef>
#include <vector>

namespace fracflux {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Jacobi rule on [0, 1] for the weight (1 - v)^a v^b, a, b > -1.
/// Built by Golub-Welsch; exact for polynomials of degree 2n - 1.
GaussRule gaussJacobi01(std::size_t n, double a, double b);

/// Gauss-Legendre rule on [lo, hi].
GaussRule gaussLegendre(std::size_t n, double lo, double hi);

/// 1 / Gamma(x), zero at the poles x = 0, -1, -2, ...
double rgamma(double x);

double betaFunction(double a, double b);

}  // namespace fracflux
