#include <gtest/gtest.h>

#include <cmath>

#include "fracflux/error.hpp"
#include "fracflux/fracops.hpp"
#include "fracflux/quadrature.hpp"

using namespace fracflux;

namespace {

SampledField power(double p, std::size_t n, double grading = 2.0, double length = 1.0) {
    const Grid g({AxisSpec::fractional(length, n, grading)});
    return SampledField::fromRegular(g, 1, [](std::span<const double>, std::size_t) { return Complex(1.0); }, {p});
}

double gammaRatio(double a, double b) { return std::exp(std::lgamma(a) - std::lgamma(b)); }

}  // namespace

class PowerRule : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(PowerRule, Integral) {
    const auto [p, nu] = GetParam();
    const SampledField f = power(p, 64);
    const SampledField out = fracIntegral(f, nu, 0);
    for (std::size_t i = 0; i < f.points(); ++i) {
        const double t = f.grid().coordinate(i, 0);
        const double exact = gammaRatio(p + 1.0, p + nu + 1.0) * std::pow(t, p + nu);
        EXPECT_NEAR(out.value(i).real() / exact, 1.0, 1e-9) << "t=" << t;
    }
}

TEST_P(PowerRule, Derivative) {
    const auto [p, nu] = GetParam();
    const SampledField f = power(p, 64);
    const SampledField out = fracDerivative(f, nu, 0);
    for (std::size_t i = 0; i < f.points(); ++i) {
        const double t = f.grid().coordinate(i, 0);
        const double exact = gammaRatio(p + 1.0, p + 1.0 - nu) * std::pow(t, p - nu);
        EXPECT_NEAR(out.value(i).real() / exact, 1.0, 1e-8) << "t=" << t;
    }
}

INSTANTIATE_TEST_SUITE_P(Family, PowerRule,
                         ::testing::Values(std::pair{0.0, 0.25}, std::pair{0.0, 0.5}, std::pair{0.5, 0.75},
                                           std::pair{0.3, 1.25}, std::pair{1.0, 0.5}, std::pair{1.0, 1.25}));

TEST(Fracops, HalfDerivativeOfConstant) {
    const SampledField f = power(0.0, 32);
    const SampledField d = fracDerivative(f, 0.5, 0);
    for (std::size_t i = 0; i < f.points(); ++i) {
        const double t = f.grid().coordinate(i, 0);
        EXPECT_NEAR(d.value(i).real() * std::sqrt(M_PI * t), 1.0, 1e-10);
    }
}

TEST(Fracops, GrunwaldLetnikovIsFirstOrder) {
    const std::size_t n = 1024;
    const Grid g({AxisSpec::fractional(1.0, n, 1.0)});
    const auto f = SampledField::fromFunction(g, 1, [](std::span<const double> x, std::size_t) { return Complex(x[0]); });
    const SampledField d = glDerivative(f, 0.5, 0);
    for (std::size_t i = n / 2; i < n; ++i) {
        const double t = g.coordinate(i, 0);
        EXPECT_NEAR(d.value(i).real(), 2.0 * std::sqrt(t / M_PI), 2.0 / n);
    }
}

TEST(Fracops, GrunwaldLetnikovNeedsUniformMesh) {
    EXPECT_THROW(glDerivative(power(1.0, 16, 2.0), 0.5, 0), Error);
}

TEST(Fracops, Preconditions) {
    const SampledField f = power(0.5, 16);
    EXPECT_THROW(fracDerivative(f, 2.5, 0), Error);
    EXPECT_THROW(fracIntegral(f, -0.5, 0), Error);
    EXPECT_THROW(fracIntegral(power(-1.5, 16), 0.5, 0), Error);
    const SampledField x(Grid({AxisSpec::periodic(1.0, 8)}));
    try {
        fracIntegral(x, 0.5, 0);
        FAIL() << "classical axis accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AxisRole);
    }
}

TEST(Fracops, LemmaProxy) {
    EXPECT_TRUE(lemmaProxy(power(0.5, 32), 0.5, 0).satisfied);
    EXPECT_FALSE(lemmaProxy(power(-0.5, 32), 0.5, 0).satisfied);
}

TEST(Fracops, IdentityResiduals) {
    const SampledField f = power(0.3, 64);
    const SampledField g = power(0.5, 64);
    IdentityParams prm;
    prm.nu = 0.5;
    prm.mu = 0.25;
    EXPECT_LT(maxNorm(identityResidualField(Identity::CompositionInt, f, f, 0, prm)), 1e-10);
    prm.nu = 0.75;
    prm.gamma = 0.25;
    EXPECT_LT(maxNorm(identityResidualField(Identity::LeibnizInt, f, g, 0, prm)), 1e-8);
}

TEST(Fracops, CompositionWitnessRejectedUnderPreconditions) {
    IdentityParams prm;
    prm.nu = 0.9;
    prm.mu = 0.5;
    const SampledField f = power(-0.5, 32);
    EXPECT_THROW(identityResidualField(Identity::CompositionDer, f, f, 0, prm), Error);
}
