#include "fracflux/classical.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracflux/error.hpp"

namespace fracflux {

std::vector<double> finiteDifferenceWeights(double x0, const std::vector<double>& nodes, int order) {
    const std::size_t n = nodes.size();
    const auto m = static_cast<std::size_t>(order);
    // c[j][k]: weight of node j for the k-th derivative.
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
    return w;
}

namespace {

SampledField spectralDerivative(const SampledField& f, std::size_t axis, int order) {
    const Grid& grid = f.grid();
    const std::size_t n = grid.extent(axis);
    const std::size_t stride = grid.stride(axis);
    const double length = grid.axis(axis).length;

    std::vector<Complex> factor(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<long>(j);
        const long wave = jj <= static_cast<long>(n) / 2 ? jj : jj - static_cast<long>(n);
        const double k = 2.0 * std::numbers::pi * static_cast<double>(wave) / length;
        Complex ik = std::pow(Complex(0.0, k), order);
        if (n % 2 == 0 && j == n / 2 && order % 2 == 1) ik = 0.0;
        factor[j] = ik / static_cast<double>(n);
    }

    std::vector<Complex> buf(n);
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);

    SampledField out = f;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        if (grid.indexAlong(p, axis) != 0) continue;
        for (std::size_t c = 0; c < f.components(); ++c) {
            for (std::size_t j = 0; j < n; ++j) buf[j] = f.regular(p + j * stride, c);
            fftw_execute(fwd);
            for (std::size_t j = 0; j < n; ++j) buf[j] *= factor[j];
            fftw_execute(bwd);
            for (std::size_t j = 0; j < n; ++j) out.regularRef(p + j * stride, c) = buf[j];
        }
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    return out;
}

SampledField finiteDifferenceDerivative(const SampledField& f, std::size_t axis, int order) {
    const Grid& grid = f.grid();
    const std::size_t n = grid.extent(axis);
    const std::size_t stride = grid.stride(axis);
    const std::size_t central = 2 * static_cast<std::size_t>((order + 1) / 2) + 3;
    const std::size_t sided = static_cast<std::size_t>(order) + 4;
    require(n >= sided, ErrorCode::Precondition, "too few nodes for finite differences");

    const std::vector<double> x = grid.axis(axis).coordinates();
    std::vector<std::size_t> start(n);
    std::vector<std::vector<double>> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto half = static_cast<long>(central / 2);
        std::size_t width = central;
        long s = static_cast<long>(i) - half;
        if (s < 0 || s + static_cast<long>(central) > static_cast<long>(n)) {
            width = sided;
            s = std::clamp(static_cast<long>(i) - static_cast<long>(sided / 2), 0L,
                           static_cast<long>(n - sided));
        }
        start[i] = static_cast<std::size_t>(s);
        std::vector<double> nodes(x.begin() + s, x.begin() + s + static_cast<long>(width));
        weights[i] = finiteDifferenceWeights(x[i], nodes, order);
    }

    SampledField out = f;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const std::size_t i = grid.indexAlong(p, axis);
        const std::size_t base = p - i * stride;
        for (std::size_t c = 0; c < f.components(); ++c) {
            Complex v{};
            for (std::size_t k = 0; k < weights[i].size(); ++k)
                v += weights[i][k] * f.regular(base + (start[i] + k) * stride, c);
            out.regularRef(p, c) = v;
        }
    }
    return out;
}

}  // namespace

SampledField classicalDerivative(const SampledField& f, std::size_t axis, int order) {
    const Grid& grid = f.grid();
    require(axis < grid.rank(), ErrorCode::ShapeMismatch, "classicalDerivative: axis out of range");
    require(!grid.axis(axis).isFractional(), ErrorCode::AxisRole,
            "classicalDerivative: axis is fractional");
    require(order >= 1 && order <= kMaxClassicalOrder, ErrorCode::Precondition,
            "classicalDerivative: order must be 1.." + std::to_string(kMaxClassicalOrder));
    SampledField out = grid.axis(axis).topology == Topology::Periodic
                           ? spectralDerivative(f, axis, order)
                           : finiteDifferenceDerivative(f, axis, order);
    out.ensureFinite("classicalDerivative");
    return out;
}

}  // namespace fracflux
