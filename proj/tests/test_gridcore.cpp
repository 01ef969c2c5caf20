#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "fracflux/classical.hpp"
#include "fracflux/convolution.hpp"
#include "fracflux/error.hpp"
#include "fracflux/field.hpp"
#include "fracflux/grid.hpp"
#include "fracflux/quadrature.hpp"
#include "fracflux/special.hpp"

using namespace fracflux;

namespace {

using C = std::complex<double>;

struct K0Point {
    C z;
    C value;
};

const K0Point kK0[] = {
#include "data/k0_oracle.inc"
};

}  // namespace

TEST(Grid, GradedNodes) {
    const AxisSpec t = AxisSpec::fractional(2.0, 8, 2.0);
    EXPECT_DOUBLE_EQ(t.coordinate(0), 2.0 / 64.0);
    EXPECT_DOUBLE_EQ(t.coordinate(7), 2.0);
    EXPECT_DOUBLE_EQ(t.coordinate(3), 2.0 * 0.25);
}

TEST(Grid, PeriodicAndTruncated) {
    const AxisSpec p = AxisSpec::periodic(2.0 * M_PI, 8);
    EXPECT_NEAR(p.spacing(), M_PI / 4.0, 1e-15);
    EXPECT_DOUBLE_EQ(p.coordinate(0), -M_PI);
    // cell centres, symmetric about 0
    const AxisSpec l = AxisSpec::truncatedLine(10.0, 10);
    EXPECT_DOUBLE_EQ(l.coordinate(0), -4.5);
    EXPECT_DOUBLE_EQ(l.coordinate(9), 4.5);
}

TEST(Grid, FlattenRoundTrip) {
    const Grid g({AxisSpec::fractional(1.0, 8), AxisSpec::periodic(1.0, 5), AxisSpec::truncatedLine(2.0, 7)});
    EXPECT_EQ(g.size(), 8u * 5u * 7u);
    for (std::size_t p = 0; p < g.size(); p += 13) EXPECT_EQ(g.flatten(g.unflatten(p)), p);
    EXPECT_EQ(g.fractionalAxes(), std::vector<std::size_t>{0});
    EXPECT_EQ(g.classicalAxes(), (std::vector<std::size_t>{1, 2}));
}

TEST(Grid, RejectsBadAxis) {
    EXPECT_THROW(AxisSpec::fractional(-1.0, 8).validate(), Error);
    EXPECT_THROW(Grid({AxisSpec::fractional(1.0, 0)}), Error);
}

TEST(Field, ExponentIsMetadata) {
    const Grid g({AxisSpec::fractional(1.0, 16)});
    const auto f = SampledField::fromRegular(g, 1, [](std::span<const double>, std::size_t) { return C(3.0); }, {-0.5});
    for (std::size_t p = 0; p < g.size(); ++p) {
        const double t = g.coordinate(p, 0);
        EXPECT_NEAR(f.value(p).real(), 3.0 / std::sqrt(t), 1e-12 / std::sqrt(t));
    }
}

TEST(Field, ArithmeticNeedsSameGrid) {
    const SampledField a(Grid({AxisSpec::fractional(1.0, 8)}));
    const SampledField b(Grid({AxisSpec::fractional(1.0, 9)}));
    EXPECT_THROW(add(a, b), Error);
}

TEST(Quadrature, GaussJacobiMoments) {
    // int_0^1 (1-x)^a x^b x^k dx = B(b+k+1, a+1)
    const double a = -0.4, b = 0.3;
    const GaussRule rule = gaussJacobi01(12, a, b);
    for (int k = 0; k < 20; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        EXPECT_NEAR(s, betaFunction(b + k + 1.0, a + 1.0), 1e-14) << k;
    }
}

TEST(Quadrature, ReciprocalGamma) {
    EXPECT_DOUBLE_EQ(rgamma(0.0), 0.0);
    EXPECT_DOUBLE_EQ(rgamma(-2.0), 0.0);
    EXPECT_NEAR(rgamma(0.5), 1.0 / std::sqrt(M_PI), 1e-15);
    EXPECT_NEAR(rgamma(5.0), 1.0 / 24.0, 1e-16);
}

TEST(Convolution, PowerKernelsCompose) {
    const Grid g({AxisSpec::fractional(2.0, 64, 2.0)});
    const double p = 0.3, q = 0.45;
    const SampledField c = laplaceConvolve(powerKernel(g, 0, p), powerKernel(g, 0, q), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g.coordinate(i, 0);
        const double exact = std::pow(t, p + q - 1.0) * rgamma(p + q);
        EXPECT_NEAR(c.value(i).real() / exact, 1.0, 1e-10) << t;
    }
}

TEST(Classical, DerivativeOfMode) {
    const Grid g({AxisSpec::periodic(2.0 * M_PI, 32)});
    const auto f = SampledField::fromFunction(g, 1, [](std::span<const double> x, std::size_t) {
        return std::exp(C(0.0, 3.0 * x[0]));
    });
    const SampledField d = classicalDerivative(f, 0, 2);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(d.value(i) + 9.0 * f.value(i)), 0.0, 1e-10);
}

TEST(Special, BesselK0AgainstOracle) {
    for (const auto& [z, v] : kK0) EXPECT_LE(std::abs(besselK0(z) - v), 1e-13 * std::abs(v)) << z;
}
