#include <gtest/gtest.h>

#include <cmath>

#include "fracflux/error.hpp"
#include "fracflux/fracops.hpp"
#include "fracflux/mittag_leffler.hpp"

using namespace fracflux;

namespace {

struct MlOracle {
    double alpha;
    double z;
    double value;
};

const MlOracle kOracle[] = {
#include "ml_oracle.inc"
};

}  // namespace

TEST(MittagLeffler, OracleTable) {
    for (const auto& o : kOracle) EXPECT_NEAR(mlEval(o.alpha, o.z) / o.value, 1.0, 1e-10) << o.alpha << ' ' << o.z;
}

TEST(MittagLeffler, ExponentialAndCosine) {
    for (double z = -30.0; z <= 20.0; z += 0.37) EXPECT_NEAR(mlEval(1.0, z) / std::exp(z), 1.0, 1e-10) << z;
    for (double x = 0.0; x <= 20.0; x += 0.29) EXPECT_NEAR(mlEval(2.0, -x * x), std::cos(x), 1e-10) << x;
}

TEST(MittagLeffler, HalfOrderIsScaledErfc) {
    for (double x : {0.1, 1.0, 3.0, 8.0, 25.0}) {
        const double exact = std::exp(x * x) * std::erfc(x);
        EXPECT_NEAR(mlEval(0.5, -x) / exact, 1.0, 1e-10) << x;
    }
}

TEST(MittagLeffler, CrossoversAreContinuous) {
    for (double alpha : {0.3, 0.5, 0.7, 0.9, 1.5}) {
        const double a = -mlSeriesSwitch(alpha);
        const double b = -mlAsymptoticSwitch(alpha);
        EXPECT_NEAR(mlEvalWith(alpha, a, MLMethod::Series), mlEvalWith(alpha, a, MLMethod::Integral), 1e-9);
        EXPECT_NEAR(mlEvalWith(alpha, b, MLMethod::Integral), mlEvalWith(alpha, b, MLMethod::Asymptotic), 1e-9);
    }
}

TEST(MittagLeffler, Errors) {
    EXPECT_THROW(mlEval(0.0, 1.0), Error);
    EXPECT_THROW(mlEval(2.5, 1.0), Error);
    try {
        mlEval(0.5, 2.0 * mlOverflowThreshold(0.5));
        FAIL() << "no overflow reported";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Overflow);
    }
}

TEST(MittagLeffler, ModeSolutionStartsAtInitialMode) {
    const Grid g({AxisSpec::fractional(1.0, 64, 2.0), AxisSpec::periodic(2.0 * M_PI, 8)});
    const SampledField phi = modeSolution(1.0, 0.5, 1.0, ModeBranch::Forward, g);
    // t_0 is tiny, so phi(t_0, x) ~ e^{ix}
    for (std::size_t j = 0; j < 8; ++j) {
        const std::size_t p = g.flatten({0, j});
        const double x = g.coordinate(p, 1);
        EXPECT_NEAR(std::abs(phi.value(p) - std::exp(Complex(0.0, x))), 0.0, 0.05);
    }
    const std::size_t last = g.flatten({63, 0});
    EXPECT_NEAR(std::abs(phi.value(last)), mlEval(0.5, -1.0), 1e-12);
}
