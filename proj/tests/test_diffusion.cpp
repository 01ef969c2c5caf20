#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fracflux/diffusion.hpp"
#include "fracflux/error.hpp"

using namespace fracflux;

namespace {

double airyAi(double x) {
    if (x == 0.0) return 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
    return std::sqrt(x / 3.0) * std::cyl_bessel_k(1.0 / 3.0, 2.0 / 3.0 * std::pow(x, 1.5)) / M_PI;
}

}  // namespace

TEST(Green, HeatKernelSpotValues) {
    EXPECT_NEAR(greensFunction(1.0, 1.0, 1, 0.0, 1.0), 0.5 / std::sqrt(M_PI), 1e-10);
    for (double r : {1e-4, 0.5, 2.0}) {
        EXPECT_NEAR(greensFunction(1.0, 1.0, 2, r, 1.0), std::exp(-r * r / 4.0) / (4.0 * M_PI), 1e-10);
        EXPECT_NEAR(greensFunction(1.0, 1.0, 3, r, 1.0), std::exp(-r * r / 4.0) * std::pow(4.0 * M_PI, -1.5), 1e-10);
    }
}

TEST(Green, OriginRejectedAboveOneDimension) {
    EXPECT_THROW(greensFunction(0.5, 1.0, 2, 0.0, 1.0), Error);
    EXPECT_THROW(greensFunction(0.5, 1.0, 3, 0.0, 1.0), Error);
}

TEST(Green, OriginValueOneDimension) {
    // G(0, t) = t^{-alpha/2} / (2 Gamma(1 - alpha/2))
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (double t : {0.1, 1.0, 4.0}) {
            const double exact = std::pow(t, -alpha / 2.0) / (2.0 * std::tgamma(1.0 - alpha / 2.0));
            EXPECT_NEAR(greensFunction(alpha, 1.0, 1, 0.0, t) / exact, 1.0, 1e-8) << alpha << ' ' << t;
        }
    }
}

TEST(Green, AiryProfileAtTwoThirds) {
    // alpha = 2/3: M_{1/3}(z) = 3^{2/3} Ai(z / 3^{1/3})
    const double alpha = 2.0 / 3.0;
    for (double t : {0.5, 2.0}) {
        const double s = std::pow(t, alpha / 2.0);
        for (double x : {0.0, 0.3, 1.0, 2.5, 5.0}) {
            const double z = x / s;
            const double exact = std::pow(3.0, 2.0 / 3.0) * airyAi(z / std::cbrt(3.0)) / (2.0 * s);
            EXPECT_NEAR(greensFunction(alpha, 1.0, 1, x, t), exact, 1e-9) << t << ' ' << x;
        }
    }
}

TEST(Green, DiffusivityScaling) {
    // G_D(r, t) = D^{-d/2} G_1(r / sqrt(D), t)
    const double g2 = greensFunction(0.5, 4.0, 2, 1.0, 1.0);
    EXPECT_NEAR(g2, greensFunction(0.5, 1.0, 2, 0.5, 1.0) / 4.0, 1e-10);
}

TEST(Green, UnitMass) {
    for (std::size_t d = 1; d <= 3; ++d)
        for (double alpha : {0.3, 0.5, 0.8, 1.0}) EXPECT_NEAR(greensMass(alpha, 1.0, d, 1.0), 1.0, 1e-6) << d;
}

TEST(Diffusion, ProblemValidation) {
    DiffusionProblem p;
    p.alpha = 1.5;
    EXPECT_THROW(p.validate(), Error);
    p.alpha = 0.5;
    p.dim = 0;
    EXPECT_THROW(p.validate(), Error);
    p.dim = 1;
    p.diffusivity = -1.0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Diffusion, AsymptoticExponentOfPowerLaw) {
    std::vector<double> t, v;
    for (int i = 0; i < 10; ++i) {
        t.push_back(1e-4 * (1.0 + i));
        v.push_back(3.0 * std::pow(t.back(), -0.35));
    }
    EXPECT_NEAR(asymptoticExponent(t, v), -0.35, 1e-12);
}

TEST(Diffusion, SpectralModeDecay) {
    DiffusionProblem p;
    p.alpha = 1.0;
    p.initial = InitialData::mode({1.0});
    const Grid g({AxisSpec::fractional(1.0, 8), AxisSpec::periodic(2.0 * M_PI, 8)});
    const SampledField u = solve(p, g);
    for (std::size_t i = 0; i < 8; ++i) {
        const std::size_t pt = g.flatten({i, 0});
        const double t = g.coordinate(pt, 0), x = g.coordinate(pt, 1);
        EXPECT_NEAR(std::abs(u.value(pt) - std::exp(Complex(-t, x))), 0.0, 1e-12);
    }
}
