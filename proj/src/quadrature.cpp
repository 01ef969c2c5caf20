#include "fracflux/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fracflux/error.hpp"

namespace fracflux {

GaussRule gaussJacobi01(std::size_t n, double a, double b) {
    require(n >= 1, ErrorCode::Precondition, "Gauss-Jacobi rule needs at least one node");
    require(a > -1.0 && b > -1.0, ErrorCode::Precondition, "Jacobi exponents must exceed -1");

    // Jacobi matrix for P^{(a,b)} on [-1, 1].
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    const double ab = a + b;
    diag(0) = (b - a) / (ab + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        diag(static_cast<Eigen::Index>(k)) = (b * b - a * a) / (s * (s + 2.0));
        double ratio;
        if (k == 1) {
            // (k + a + b) cancels against (s - 1); keeps a + b = -1 well defined.
            ratio = 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0));
        } else {
            ratio = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(ratio);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                                std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.5 * (diag(0) + 1.0);
        rule.weights[0] = mu0 / std::pow(2.0, ab + 1.0);
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    require(solver.info() == Eigen::Success, ErrorCode::NonConvergence,
            "Golub-Welsch eigenproblem failed");
    const double toUnit = std::pow(2.0, -(ab + 1.0));
    for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double v0 = solver.eigenvectors()(0, kk);
        rule.nodes[k] = 0.5 * (solver.eigenvalues()(kk) + 1.0);
        rule.weights[k] = mu0 * v0 * v0 * toUnit;
    }
    return rule;
}

GaussRule gaussLegendre(std::size_t n, double lo, double hi) {
    GaussRule rule = gaussJacobi01(n, 0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        rule.nodes[k] = lo + (hi - lo) * rule.nodes[k];
        rule.weights[k] *= (hi - lo);
    }
    return rule;
}

double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

double betaFunction(double a, double b) {
    return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
}

}  // namespace fracflux
