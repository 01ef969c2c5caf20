#include <gtest/gtest.h>

#include <cmath>

#include "fracflux/error.hpp"
#include "fracflux/mittag_leffler.hpp"
#include "fracflux/noether.hpp"

using namespace fracflux;

namespace {

const char* kSequential = R"({
  "axes": [
    {"role": "fractional", "extent": 1.0, "nodes": 16, "grading": 2.0},
    {"role": "classical", "extent": 6.283185307179586, "nodes": 8, "topology": "periodic"}
  ],
  "fractional_terms": [
    {"word": [[0, 0.3], [0, 0.4]], "coeff": 1.0},
    {"word": [[0, 0.4], [0, 0.3]], "coeff": 1.0},
    {"word": [[0, 0.5]], "coeff": 0.5}
  ],
  "classical_terms": [{"mu": [1, 1], "coeff": -1.0}]
})";

Grid modeGrid(std::size_t n) {
    return Grid({AxisSpec::fractional(1.0, n, 2.0), AxisSpec::periodic(2.0 * M_PI, 16)});
}

}  // namespace

TEST(OperatorSpec, JsonRoundTrip) {
    const OperatorSpec s = parseOperatorSpec(kSequential);
    EXPECT_EQ(s.fractionalTerms.size(), 3u);
    EXPECT_EQ(parseOperatorSpec(serializeOperatorSpec(s)), s);

    OperatorSpec m = s;
    m.classicalTerms[0].coeff = Coefficient::matrix(2, {-1.0, 0.25, 0.25, -2.0});
    m.constantTerm = Coefficient::matrix(2, {0.5, 0.0, 0.0, 0.5});
    m.validate();
    EXPECT_EQ(m.components(), 2u);
    EXPECT_EQ(parseOperatorSpec(serializeOperatorSpec(m)), m);
}

TEST(OperatorSpec, ParseErrors) {
    auto code = [](const std::string& text) {
        try {
            parseOperatorSpec(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;  // nothing thrown
    };
    EXPECT_EQ(code("{"), ErrorCode::Parse);
    EXPECT_EQ(code(R"({"fractional_terms": []})"), ErrorCode::Parse);
    EXPECT_EQ(code(R"({"axes": [{"role": "spatial", "extent": 1, "nodes": 4}]})"), ErrorCode::Parse);
    // fractional order on a classical axis
    EXPECT_EQ(code(R"({"axes": [{"role": "classical", "extent": 1, "nodes": 8}],
                      "fractional_terms": [{"word": [[0, 0.5]], "coeff": 1}]})"),
              ErrorCode::AxisRole);
    EXPECT_THROW(loadOperatorSpec("/nonexistent/spec.json"), Error);
}

TEST(Gamma, DiffusionStructure) {
    const double alpha = 0.4, c = 0.7;
    for (std::size_t dim : {1, 2, 3}) {
        std::vector<AxisSpec> axes{AxisSpec::fractional(1.0, 16, 2.0)};
        for (std::size_t d = 0; d < dim; ++d) axes.push_back(AxisSpec::periodic(2.0 * M_PI, 8));
        const GammaSet g = buildGamma(OperatorSpec::diffusion(alpha, c, axes));
        ASSERT_EQ(g.gammaTilde.size(), 1u);
        EXPECT_EQ(g.gammaTilde[0].divergence, Atom::frac(0, alpha));
        ASSERT_EQ(g.gammaTilde[0].form.terms.size(), 1u);
        EXPECT_EQ(g.gammaTilde[0].form.terms[0], (BilinearTerm{{}, {}, Coefficient::scalar(2.0)}));
        ASSERT_EQ(g.gamma.size(), dim);
        for (std::size_t a = 0; a < dim; ++a) {
            const Atom d = Atom::classical(a + 1);
            EXPECT_EQ(g.gamma[a].divergence, d);
            const BilinearForm want{{{{}, {d}, Coefficient::scalar(-c)}, {{d}, {}, Coefficient::scalar(c)}}};
            EXPECT_EQ(g.gamma[a].form, want);
        }
    }
}

TEST(Gamma, TelescopeOnModes) {
    const Grid g = modeGrid(64);
    const auto spec = OperatorSpec::diffusion(0.5, 1.0, g.axes());
    const SampledField phi = modeSolution(2.0, 0.5, 1.0, ModeBranch::Forward, g);
    const SampledField phiPrime = modeSolution(-1.0, 0.5, 1.0, ModeBranch::Conjugate, g);
    const SampledField r = telescopeResidualField(spec, phiPrime, phi, TelescopePart::Classical);
    EXPECT_LT(maxNorm(r), 1e-9);
}

TEST(Charges, MismatchedModesVanish) {
    const Grid g = modeGrid(32);
    const auto spec = OperatorSpec::diffusion(0.5, 0.7, g.axes());
    const SampledField phi = modeSolution(2.0, 0.5, 0.7, ModeBranch::Forward, g);
    const SampledField phiPrime = modeSolution(1.0, 0.5, 0.7, ModeBranch::Conjugate, g);
    EXPECT_LT(maxNorm(charge(assembleCurrent(spec, phiPrime, phi)).q), 1e-12);
}

TEST(Charges, ClassicalLimit) {
    const double c = 0.7, k = 2.0, length = 2.0 * M_PI;
    const Grid g = modeGrid(64);
    const auto spec = OperatorSpec::diffusion(1.0, c, g.axes());
    const SampledField phi = modeSolution(k, 1.0, c, ModeBranch::Forward, g);
    const SampledField phiPrime = modeSolution(-k, 1.0, c, ModeBranch::Conjugate, g);
    const ChargeSeries q = charge(assembleCurrent(spec, phiPrime, phi));
    const double w = c * k * k;
    for (std::size_t i = 0; i < 64; ++i) {
        const double t = g.axis(0).coordinate(i);
        EXPECT_NEAR(q.q.value(i).real(), 2.0 * length * std::sinh(w * t) / w, 1e-6) << t;
    }
}

TEST(Charges, SpatialIntegralOfGaussian) {
    const Grid g({AxisSpec::fractional(1.0, 8), AxisSpec::truncatedLine(20.0, 400)});
    const auto f = SampledField::fromFunction(g, 1, [](std::span<const double> x, std::size_t) {
        return Complex(x[0] * std::exp(-x[1] * x[1]));
    });
    const SampledField q = spatialIntegral(f);
    for (std::size_t i = 0; i < 8; ++i)
        EXPECT_NEAR(q.value(i).real(), g.axis(0).coordinate(i) * std::sqrt(M_PI), 1e-10);
}

TEST(Charges, SpatialIntegralRejectsHeavyTails) {
    const Grid g({AxisSpec::fractional(1.0, 8), AxisSpec::truncatedLine(4.0, 40)});
    const auto f = SampledField::fromFunction(g, 1, [](std::span<const double>, std::size_t) { return Complex(1.0); });
    EXPECT_THROW(spatialIntegral(f), Error);
}
