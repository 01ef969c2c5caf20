#include "fracflux/interpolation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fracflux/error.hpp"

namespace fracflux {

namespace {

using Matrix6 = Eigen::Matrix<double, kStencilWidth, kStencilWidth>;

// Maps samples at s = 0..5 to monomial coefficients in s.
const Matrix6& inverseVandermonde() {
    static const Matrix6 inv = [] {
        Matrix6 v;
        for (std::size_t i = 0; i < kStencilWidth; ++i)
            for (std::size_t m = 0; m < kStencilWidth; ++m)
                v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
                    std::pow(static_cast<double>(i), static_cast<double>(m));
        return Matrix6(v.fullPivLu().inverse());
    }();
    return inv;
}

}  // namespace

FractionalAxisInterpolator::FractionalAxisInterpolator(const AxisSpec& axis)
    : length_(axis.length), grading_(axis.grading), nodes_(axis.nodes) {
    require(axis.isFractional(), ErrorCode::AxisRole, "interpolator needs a fractional axis");
    require(nodes_ >= kStencilWidth, ErrorCode::Precondition, "too few nodes for interpolation");
}

double FractionalAxisInterpolator::indexCoordinate(double t) const {
    return static_cast<double>(nodes_) * std::pow(t / length_, 1.0 / grading_);
}

Stencil FractionalAxisInterpolator::stencil(double t, double c0, double c1, double c2) const {
    return build(indexCoordinate(t), c0, c1, c2);
}

Stencil FractionalAxisInterpolator::nodeStencil(std::size_t i, double c0, double c1, double c2) const {
    return build(static_cast<double>(i + 1), c0, c1, c2);
}

Stencil FractionalAxisInterpolator::build(double xi, double c0, double c1, double c2) const {
    const auto last = static_cast<long>(nodes_) - 1;
    const long right = std::clamp(static_cast<long>(std::ceil(xi)) - 1, 0L, last);
    const long start = std::clamp(right - 3, 0L, last - static_cast<long>(kStencilWidth) + 1);

    Stencil st;
    st.start = static_cast<std::size_t>(start);
    const double s = xi - static_cast<double>(start + 1);

    std::array<double, kStencilWidth> pw{};      // s^m
    std::array<double, kStencilWidth> dpw{};     // d/ds s^m
    std::array<double, kStencilWidth> ddpw{};    // d2/ds2 s^m
    pw[0] = 1.0;
    for (std::size_t m = 1; m < kStencilWidth; ++m) pw[m] = pw[m - 1] * s;
    for (std::size_t m = 1; m < kStencilWidth; ++m) dpw[m] = static_cast<double>(m) * pw[m - 1];
    for (std::size_t m = 2; m < kStencilWidth; ++m)
        ddpw[m] = static_cast<double>(m * (m - 1)) * pw[m - 2];

    // theta = (xi / r) d/ds,  theta^2 = (xi d/ds + xi^2 d2/ds2) / r^2
    const double r = grading_;
    const double a1 = c1 * xi / r + c2 * xi / (r * r);
    const double a2 = c2 * xi * xi / (r * r);

    const Matrix6& inv = inverseVandermonde();
    for (std::size_t k = 0; k < kStencilWidth; ++k) {
        double w = 0.0;
        for (std::size_t m = 0; m < kStencilWidth; ++m) {
            const double coef = inv(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
            w += coef * (c0 * pw[m] + a1 * dpw[m] + a2 * ddpw[m]);
        }
        st.w[k] = w;
    }
    return st;
}

}  // namespace fracflux
