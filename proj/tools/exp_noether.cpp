#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "experiments.hpp"
#include "fracflux/diffusion.hpp"
#include "fracflux/error.hpp"
#include "fracflux/fracops.hpp"
#include "fracflux/mittag_leffler.hpp"
#include "fracflux/noether.hpp"

namespace fracflux::cli {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

SampledField profile(const Grid& grid, const std::function<Complex(std::span<const double>)>& f) {
    return SampledField::fromFunction(grid, 1, [&](std::span<const double> x, std::size_t) { return f(x); });
}

SampledField planeWave(const Grid& grid, std::vector<double> k) {
    return profile(grid, [k](std::span<const double> x) {
        double phase = 0.0;
        for (std::size_t a = 0; a < k.size(); ++a) phase += k[a] * x[a + 1];
        return std::polar(1.0, phase);
    });
}

void addReport(ResidualReport& r, std::size_t n, double maxValue, double l2Value) {
    r.resolutions.push_back(n);
    r.maxNorm.push_back(maxValue);
    r.l2Norm.push_back(l2Value);
}

// Expected Gamma of D^alpha_t - C sum d_i^2: Gamma~_t = 2 and
// Gamma_i = C <-d_i - C d_i.
GammaSet diffusionGamma(double alpha, double c, std::size_t dim) {
    GammaSet g;
    g.gammaTilde.push_back({Atom::frac(0, alpha), {{{{}, {}, Coefficient::scalar(2.0)}}}});
    for (std::size_t a = 1; a <= dim; ++a) {
        const Atom d = Atom::classical(a);
        g.gamma.push_back({d, {{{{}, {d}, Coefficient::scalar(-c)}, {{d}, {}, Coefficient::scalar(c)}}}});
    }
    return g;
}

std::size_t gammaMismatches(const GammaSet& got, const GammaSet& want) {
    std::size_t bad = 0;
    auto cmp = [&bad](const std::vector<GammaComponent>& a, const std::vector<GammaComponent>& b) {
        if (a.size() != b.size()) {
            bad += std::max(a.size(), b.size());
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i) bad += a[i] == b[i] ? 0 : 1;
    };
    cmp(got.gammaTilde, want.gammaTilde);
    cmp(got.gamma, want.gamma);
    return bad;
}

struct LawNorms {
    double law = 0.0;
    double lawL2 = 0.0;
    double conserved = 0.0;
    double conservedL2 = 0.0;
};

// law - source and conservation - source on the mask, optionally relative to
// max |source|.
LawNorms lawNorms(const OperatorSpec& spec, const SampledField& phiPrime, const SampledField& phi,
                  const SampledField& phi0, const SampledField& phiPrime0, const PointMask& mask, bool relative) {
    const Current current = assembleCurrent(spec, phiPrime, phi);
    const StationarityResult st = stationarityResidual(current, spec, phiPrime, phi, phi0, phiPrime0);
    const SampledField& source = *st.sourceField;
    const SampledField conserved = conservationResidual(toConservedCurrent(current));
    const double s = relative ? maxNorm(source, mask) : 1.0;
    const SampledField a = subtract(st.lawResidual, source);
    const SampledField b = subtract(conserved, source);
    return {maxNorm(a, mask) / s, l2Norm(a, mask) / s, maxNorm(b, mask) / s, l2Norm(b, mask) / s};
}

}  // namespace

ExperimentOutput currents(const Context& ctx) {
    ExperimentOutput out;
    const double c = ctx.number("diffusivity", 0.7);
    require(c > 0.0, ErrorCode::Parse, "currents.diffusivity must be positive");
    const auto alphas = ctx.numbers("alphas", {0.3, 0.5});
    for (double a : alphas) require(a > 0.0 && a < 1.0, ErrorCode::Parse, "currents: every alpha must lie in (0, 1)");
    const double grading = ctx.number("grading", 2.0);

    // Gamma of both diffusion operators.
    for (std::size_t dim : {1, 2, 3}) {
        std::vector<AxisSpec> axes{AxisSpec::fractional(1.0, 16, grading)};
        for (std::size_t d = 0; d < dim; ++d) axes.push_back(AxisSpec::periodic(2.0 * std::numbers::pi, 8));
        for (double alpha : alphas) {
            const auto spec = OperatorSpec::diffusion(alpha, c, axes);
            const double bad =
                static_cast<double>(gammaMismatches(buildGamma(spec), diffusionGamma(alpha, c, dim)));
            ctx.atMost(out, "gamma " + std::to_string(dim) + "+1 alpha=" + fmt(alpha), "mismatching components", bad,
                       0.0, 6);
        }
    }

    // Mode pairs on a periodic line: full identity with the initial terms.
    const auto levels = ctx.sizes("mode_resolutions", {32, 64, 128});
    const double k = ctx.number("k", 2.0);
    for (double alpha : alphas) {
        for (double kp : ctx.numbers("conjugate_k", {-2.0, -1.0})) {
            ResidualReport law;
            ResidualReport cons;
            for (std::size_t n : levels) {
                const Grid grid({AxisSpec::fractional(1.0, n, grading), AxisSpec::periodic(2.0 * std::numbers::pi, 16)});
                const auto spec = OperatorSpec::diffusion(alpha, c, grid.axes());
                const SampledField phi = modeSolution(k, alpha, c, ModeBranch::Forward, grid);
                const SampledField phiPrime = modeSolution(kp, alpha, c, ModeBranch::Conjugate, grid);
                const LawNorms v = lawNorms(spec, phiPrime, phi, planeWave(grid, {k}), planeWave(grid, {kp}), {}, true);
                addReport(law, n, v.law, v.lawL2);
                addReport(cons, n, v.conserved, v.conservedL2);
            }
            finalizeReport(law, 1e-12);
            finalizeReport(cons, 1e-12);
            const std::string id = " k=" + fmt(k) + " k'=" + fmt(kp) + " alpha=" + fmt(alpha);
            ctx.gateDecreasing(out, "mode-pair stationarity" + id, law, 7);
            ctx.gateReport(out, "mode-pair stationarity" + id, law, 5e-3, 0.0, 7, alpha);
            ctx.gateDecreasing(out, "mode-pair conservation" + id, cons, 7);
            ctx.gateReport(out, "mode-pair conservation" + id, cons, 5e-3, 0.0, 7, alpha);
        }
    }

    // Delta data, away from the source: phi = G, phi' a conjugate plane wave.
    const double regionAlpha = ctx.number("region_alpha", 0.5);
    require(regionAlpha > 0.0 && regionAlpha < 1.0, ErrorCode::Parse, "currents.region_alpha must lie in (0, 1)");
    const double kp = ctx.number("region_conjugate_k", 0.5);
    {
        ResidualReport law;
        ResidualReport cons;
        const PointMask region = [](const Grid& g, std::size_t p) {
            const double x = std::abs(g.coordinate(p, 1));
            return x >= 1.0 && x <= 6.0;
        };
        for (std::size_t n : ctx.sizes("region_resolutions", {16, 32, 64, 128})) {
            const Grid grid({AxisSpec::fractional(1.0, n, grading), AxisSpec::truncatedLine(16.0, 2 * n)});
            const auto spec = OperatorSpec::diffusion(regionAlpha, c, grid.axes());
            DiffusionProblem p{regionAlpha, c, 1, InitialData::delta()};
            const SampledField phi = solve(p, grid);
            const SampledField phiPrime = modeSolution(kp, regionAlpha, c, ModeBranch::Conjugate, grid);
            const LawNorms v = lawNorms(spec, phiPrime, phi, SampledField(grid, 1), planeWave(grid, {kp}), region, false);
            addReport(law, n, v.law, v.lawL2);
            addReport(cons, n, v.conserved, v.conservedL2);
        }
        finalizeReport(law, 1e-12);
        finalizeReport(cons, 1e-12);
        const std::string id = " 1+1 alpha=" + fmt(regionAlpha) + " 1<=|x|<=6";
        ctx.gateDecreasing(out, "delta region stationarity" + id, law, 7);
        ctx.gateReport(out, "delta region stationarity" + id, law, 0.0, 1.0, 7, regionAlpha);
        ctx.gateDecreasing(out, "delta region conservation" + id, cons, 7);
        ctx.gateReport(out, "delta region conservation" + id, cons, 0.0, 1.0, 7, regionAlpha);
    }
    {
        ResidualReport law;
        ResidualReport cons;
        const PointMask region = [](const Grid& g, std::size_t p) {
            const double r = std::hypot(g.coordinate(p, 1), g.coordinate(p, 2));
            return r >= 1.0 && r <= 3.0;
        };
        for (std::size_t n : ctx.sizes("region_2d_resolutions", {16, 32, 64})) {
            const Grid grid({AxisSpec::fractional(1.0, n, grading), AxisSpec::truncatedLine(10.0, n),
                             AxisSpec::truncatedLine(10.0, n)});
            const auto spec = OperatorSpec::diffusion(regionAlpha, c, grid.axes());
            DiffusionProblem p{regionAlpha, c, 2, InitialData::delta()};
            const SampledField phi = solve(p, grid);
            DiffusionProblem cp{regionAlpha, c, 2, InitialData::mode({kp, 0.5 * kp})};
            const SampledField phiPrime = solveConjugate(cp, grid, kp * 1.2);
            const LawNorms v = lawNorms(spec, phiPrime, phi, SampledField(grid, 1),
                                        planeWave(grid, {kp, 0.5 * kp}), region, false);
            addReport(law, n, v.law, v.lawL2);
            addReport(cons, n, v.conserved, v.conservedL2);
        }
        finalizeReport(law, 1e-12);
        finalizeReport(cons, 1e-12);
        const std::string id = " 2+1 alpha=" + fmt(regionAlpha) + " 1<=|x|<=3";
        ctx.gateDecreasing(out, "delta region stationarity" + id, law, 7);
        ctx.gateReport(out, "delta region stationarity" + id, law, 0.0, 1.0, 7, regionAlpha);
        ctx.gateDecreasing(out, "delta region conservation" + id, cons, 7);
        ctx.gateReport(out, "delta region conservation" + id, cons, 0.0, 1.0, 7, regionAlpha);
    }

    // phi' * phi of delta solutions may be differentiated termwise only for
    // alpha < 2/3 (the lemmaProxy conditions on t^{-alpha/2}).
    for (double alpha : {0.3, 0.5, 0.8}) {
        const Grid grid({AxisSpec::fractional(1.0, 32, grading), AxisSpec::truncatedLine(16.0, 32)});
        DiffusionProblem p{alpha, c, 1, InitialData::delta()};
        const SampledField phi = solve(p, grid);
        const LemmaCheck check = lemmaProxy(phi, alpha, 0);
        const std::string id = "lemma window delta data alpha=" + fmt(alpha);
        if (alpha < 2.0 / 3.0)
            ctx.atLeast(out, id, "conditions hold", check.satisfied ? 1.0 : 0.0, 1.0, 0, check.detail);
        else
            ctx.report(out, id, "conditions hold", check.satisfied ? 1.0 : 0.0, check.detail);
    }

    {
        const Grid grid({AxisSpec::fractional(1.0, 32, grading), AxisSpec::truncatedLine(16.0, 64)});
        const auto spec = OperatorSpec::diffusion(regionAlpha, c, grid.axes());
        DiffusionProblem p{regionAlpha, c, 1, InitialData::delta()};
        const SampledField phi = solve(p, grid);
        const SampledField phiPrime = modeSolution(kp, regionAlpha, c, ModeBranch::Conjugate, grid);
        out.dumps.push_back({"delta current time component", assembleCurrent(spec, phiPrime, phi).along(0)});
    }
    return out;
}

ExperimentOutput charges(const Context& ctx) {
    ExperimentOutput out;
    const double c = ctx.number("diffusivity", 0.7);
    require(c > 0.0, ErrorCode::Parse, "charges.diffusivity must be positive");
    const double k = ctx.number("k", 2.0);
    const double grading = ctx.number("grading", 2.0);
    const auto levels = ctx.sizes("resolutions", {32, 64, 128});
    const auto alphas = ctx.numbers("alphas", {0.3, 0.5});
    for (double a : alphas) require(a > 0.0 && a < 1.0, ErrorCode::Parse, "charges: every alpha must lie in (0, 1)");
    const double length = 2.0 * std::numbers::pi;

    // Mismatched modes integrate to zero over the period; alpha = 1 gives the
    // classical charge 2 L sinh(w t) / w, w = C k^2.
    {
        ResidualReport sinh;
        double mismatched = 0.0;
        for (std::size_t n : levels) {
            const Grid grid({AxisSpec::fractional(1.0, n, grading), AxisSpec::periodic(length, 16)});
            const auto spec = OperatorSpec::diffusion(1.0, c, grid.axes());
            const SampledField phi = modeSolution(k, 1.0, c, ModeBranch::Forward, grid);
            const ChargeSeries q = charge(assembleCurrent(spec, modeSolution(-k, 1.0, c, ModeBranch::Conjugate, grid), phi));
            const ChargeSeries qm =
                charge(assembleCurrent(spec, modeSolution(k - 1.0, 1.0, c, ModeBranch::Conjugate, grid), phi));
            mismatched = std::max(mismatched, maxNorm(qm.q));
            const double w = c * k * k;
            double err = 0.0;
            double sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = grid.axis(0).coordinate(i);
                const double e = std::abs(q.q.value(i) - 2.0 * length * std::sinh(w * t) / w);
                err = std::max(err, e);
                sq += e * e;
            }
            addReport(sinh, n, err, std::sqrt(sq / static_cast<double>(n)));
        }
        finalizeReport(sinh, 1e-12);
        ctx.atMost(out, "mismatched modes alpha=1 k=" + fmt(k) + " k'=" + fmt(k - 1.0), "max |Q|", mismatched, 1e-12, 8);
        ctx.gateReport(out, "matched modes alpha=1 Q = 2L sinh(wt)/w", sinh, 1e-6, 0.0, 8, 1.0);
    }

    for (double alpha : alphas) {
        ResidualReport stat;
        ResidualReport cons;
        double mismatched = 0.0;
        for (std::size_t n : levels) {
            const Grid grid({AxisSpec::fractional(1.0, n, grading), AxisSpec::periodic(length, 16)});
            const auto spec = OperatorSpec::diffusion(alpha, c, grid.axes());
            const SampledField phi = modeSolution(k, alpha, c, ModeBranch::Forward, grid);
            const SampledField phiPrime = modeSolution(-k, alpha, c, ModeBranch::Conjugate, grid);
            const Current current = assembleCurrent(spec, phiPrime, phi);
            const ChargeSeries q = charge(current);
            const ChargeSeries qPrime = charge(toConservedCurrent(current), ChargeKind::Conserved);
            const auto st = stationarityResidual(current, spec, phiPrime, phi, planeWave(grid, {k}), planeWave(grid, {-k}));
            const auto rep = chargeIdentityCheck(q, qPrime, alpha, boundaryFlux(current), spatialIntegral(*st.sourceField));
            addReport(stat, n, rep.stationarity / rep.scale, rep.stationarity / rep.scale);
            addReport(cons, n, rep.conservation / rep.scale, rep.conservation / rep.scale);
            const auto qm = charge(assembleCurrent(spec, modeSolution(k - 1.0, alpha, c, ModeBranch::Conjugate, grid), phi));
            mismatched = std::max(mismatched, maxNorm(qm.q));
        }
        finalizeReport(stat, 1e-12);
        finalizeReport(cons, 1e-12);
        const std::string id = " alpha=" + fmt(alpha) + " k=" + fmt(k);
        ctx.atMost(out, "mismatched modes" + id + " k'=" + fmt(k - 1.0), "max |Q|", mismatched, 1e-12, 8);
        ctx.gateDecreasing(out, "charge identity D^a Q = initial - flux" + id, stat, 8);
        ctx.addRows(out, "charge identity D^a Q = initial - flux" + id, stat, 0.0, out.checks.back().pass, alpha);
        ctx.gateDecreasing(out, "charge identity dQ'/dt = D^a Q" + id, cons, 8);
        ctx.addRows(out, "charge identity dQ'/dt = D^a Q" + id, cons, 0.0, out.checks.back().pass, alpha);
        // "The same tolerance": the conserved-charge identity is no worse than
        // the stationarity identity at the finest level (up to a factor 10).
        ctx.atMost(out, "charge identity dQ'/dt = D^a Q" + id, "finest / stationarity finest",
                   cons.finestMax() / std::max(stat.finestMax(), 1e-300), 10.0, 8);
    }

    // Delta data on a long truncated line: the cancellation D^alpha Q = 0 is
    // not asserted, only reported.
    {
        const double alpha = ctx.number("delta_alpha", 0.5);
        require(alpha > 0.0 && alpha < 1.0, ErrorCode::Parse, "charges.delta_alpha must lie in (0, 1)");
        const double kp = 0.5;
        const std::size_t n = levels.back();
        const Grid grid({AxisSpec::fractional(1.0, n, grading), AxisSpec::truncatedLine(48.0, 6 * n)});
        const auto spec = OperatorSpec::diffusion(alpha, c, grid.axes());
        DiffusionProblem p{alpha, c, 1, InitialData::delta()};
        const SampledField phi = solve(p, grid);
        const SampledField phiPrime = modeSolution(kp, alpha, c, ModeBranch::Conjugate, grid);
        const Current current = assembleCurrent(spec, phiPrime, phi);
        const ChargeSeries q = charge(current);
        const ChargeSeries qPrime = charge(toConservedCurrent(current), ChargeKind::Conserved);
        const SampledField zero(q.q.grid(), 1);
        const auto rep = chargeIdentityCheck(q, qPrime, alpha, boundaryFlux(current), zero);
        const double qmax = maxNorm(q.q);
        ctx.report(out, "whole-line delta alpha=" + fmt(alpha), "max |D^a Q| / max |Q|", rep.scale / qmax,
                   "zero only under extra decay conditions; reported, not asserted");
        ctx.report(out, "whole-line delta alpha=" + fmt(alpha), "max |dQ'/dt - D^a Q| / max |Q|",
                   rep.conservation / qmax);
        out.dumps.push_back({"whole-line delta charge", q.q});
    }
    return out;
}

namespace {

// Random smooth pair: t^p (a0 + a1 t + a2 t^2) e^{i k.x} per component, with
// integer wave numbers on periodic axes and a Gaussian on truncated lines.
FieldFactory randomField(const OperatorSpec& spec, std::size_t baseNodes, double p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> wave(-2, 2);
    const std::size_t comps = spec.components();
    std::vector<std::array<Complex, 3>> poly(comps);
    std::vector<std::vector<double>> k(comps, std::vector<double>(spec.axes.size(), 0.0));
    for (std::size_t cIdx = 0; cIdx < comps; ++cIdx) {
        for (auto& a : poly[cIdx]) a = Complex(u(rng), u(rng));
        for (std::size_t ax = 0; ax < spec.axes.size(); ++ax) {
            const AxisSpec& s = spec.axes[ax];
            if (s.isFractional()) continue;
            k[cIdx][ax] = s.topology == Topology::Periodic ? wave(rng) * 2.0 * std::numbers::pi / s.length : u(rng);
        }
    }
    const auto axes = spec.axes;
    return [=](std::size_t n) {
        std::vector<AxisSpec> scaled = axes;
        std::vector<double> exps(axes.size(), 0.0);
        for (std::size_t ax = 0; ax < axes.size(); ++ax) {
            scaled[ax].nodes = std::max<std::size_t>(axes[ax].nodes * n / baseNodes, 6);
            if (axes[ax].isFractional()) exps[ax] = p;
        }
        return SampledField::fromRegular(
            Grid(scaled), comps,
            [&](std::span<const double> x, std::size_t cIdx) {
                Complex v = 1.0;
                double phase = 0.0;
                for (std::size_t ax = 0; ax < axes.size(); ++ax) {
                    if (axes[ax].isFractional()) {
                        const double t = x[ax];
                        v *= poly[cIdx][0] + t * (poly[cIdx][1] + t * poly[cIdx][2]);
                    } else {
                        phase += k[cIdx][ax] * x[ax];
                        if (axes[ax].topology == Topology::TruncatedLine) v *= std::exp(-0.5 * x[ax] * x[ax]);
                    }
                }
                return v * std::polar(1.0, phase);
            },
            exps);
    };
}

OperatorSpec mixedSpec(std::size_t nodes, double grading) {
    OperatorSpec s;
    s.axes = {AxisSpec::fractional(1.0, nodes, grading), AxisSpec::periodic(2.0 * std::numbers::pi, nodes / 2),
              AxisSpec::truncatedLine(8.0, nodes / 2)};
    s.fractionalTerms.push_back({{Atom::frac(0, 0.5)}, Coefficient::scalar(1.0)});
    s.classicalTerms.push_back({{1, 1}, Coefficient::scalar(-0.7)});
    s.classicalTerms.push_back({{2, 2}, Coefficient::scalar(-0.4)});
    s.classicalTerms.push_back({{1, 2}, Coefficient::scalar(0.2)});
    s.classicalTerms.push_back({{2}, Coefficient::scalar(0.3)});
    s.constantTerm = Coefficient::scalar(0.1);
    s.validate();
    return s;
}

OperatorSpec sequentialSpec(std::size_t nodes, double grading) {
    OperatorSpec s;
    s.axes = {AxisSpec::fractional(1.0, nodes, grading), AxisSpec::periodic(2.0 * std::numbers::pi, nodes / 2)};
    s.fractionalTerms.push_back({{Atom::frac(0, 0.3), Atom::frac(0, 0.4)}, Coefficient::scalar(1.0)});
    s.fractionalTerms.push_back({{Atom::frac(0, 0.5)}, Coefficient::scalar(0.5)});
    s.classicalTerms.push_back({{1, 1}, Coefficient::scalar(-1.0)});
    s.validate();
    return s;
}

OperatorSpec matrixSpec(std::size_t nodes, double grading, const std::vector<double>& frac,
                        const std::vector<double>& lap, const std::vector<double>& grad) {
    OperatorSpec s;
    s.axes = {AxisSpec::fractional(1.0, nodes, grading), AxisSpec::periodic(2.0 * std::numbers::pi, nodes / 2)};
    const std::size_t n = frac.size() == 4 ? 2 : 1;
    auto coeff = [n](const std::vector<double>& v) { return n == 1 ? Coefficient::scalar(v[0]) : Coefficient::matrix(n, v); };
    s.fractionalTerms.push_back({{Atom::frac(0, 0.5)}, coeff(frac)});
    s.classicalTerms.push_back({{1, 1}, coeff(lap)});
    s.classicalTerms.push_back({{1}, coeff(grad)});
    s.validate();
    return s;
}

}  // namespace

ExperimentOutput generalOperator(const Context& ctx) {
    ExperimentOutput out;
    const double grading = ctx.number("grading", 2.0);
    const double pf = ctx.number("left_exponent", 0.5);
    const double pg = ctx.number("right_exponent", 0.5);
    const auto levels = ctx.sizes("resolutions", {16, 32, 64});
    const std::size_t base = levels.front();
    std::mt19937_64 rng(ctx.seed());

    struct Case {
        std::string name;
        OperatorSpec spec;
        std::size_t pairs;
    };
    const auto pairs = static_cast<std::size_t>(ctx.number("pairs", 2));
    require(pairs >= 1, ErrorCode::Parse, "general-operator.pairs must be at least 1");
    std::vector<Case> cases = {
        {"mixed 2+1 D^0.5 + second order", mixedSpec(base, grading), 1},
        {"sequential D^0.3 D^0.4", sequentialSpec(base, grading), pairs},
        {"2x2 matrix", matrixSpec(base, grading, {1.0, 0.3, -0.2, 0.8}, {-0.5, 0.1, 0.0, -0.7}, {0.2, 0.0, 0.4, 0.1}),
         pairs},
    };
    const std::string file = ctx.text("spec_file", "");
    if (!file.empty()) {
        OperatorSpec spec;
        try {
            spec = loadOperatorSpec(file);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Io) throw;
            throw Error(ErrorCode::Parse, "general-operator.spec_file: " + std::string(e.what()));
        }
        cases.push_back({"spec file " + file, spec, pairs});
    }

    // The full residual is the sum of the two parts, so only the parts are run.
    for (const auto& cs : cases) {
        const std::size_t specBase = cs.spec.grid().extent(cs.spec.grid().fractionalAxes().at(0));
        for (std::size_t i = 0; i < cs.pairs; ++i) {
            const FieldFactory f = randomField(cs.spec, specBase, pf, rng);
            const FieldFactory g = randomField(cs.spec, specBase, pg, rng);
            std::vector<std::size_t> scaled;
            for (std::size_t n : levels) scaled.push_back(n * specBase / base);
            for (auto [part, label] : {std::pair{TelescopePart::Classical, "classical"},
                                       std::pair{TelescopePart::Fractional, "fractional"}}) {
                const ResidualReport r = telescopeResidual(cs.spec, f, g, scaled, part);
                ctx.gateReport(out, "telescope " + cs.name + " pair " + std::to_string(i) + " " + label, r, 0.0, 1.0, 6);
            }
        }
    }

    // A block-diagonal coefficient splits into two scalar operators.
    {
        const std::size_t n = levels.back();
        const OperatorSpec diag = matrixSpec(n, grading, {1.0, 0.0, 0.0, 0.6}, {-0.5, 0.0, 0.0, -0.9}, {0.2, 0.0, 0.0, -0.3});
        const OperatorSpec a = matrixSpec(n, grading, {1.0}, {-0.5}, {0.2});
        const OperatorSpec b = matrixSpec(n, grading, {0.6}, {-0.9}, {-0.3});
        const SampledField f = randomField(diag, n, pf, rng)(n);
        const SampledField g = randomField(diag, n, pg, rng)(n);
        const SampledField whole = telescopeResidualField(diag, f, g);
        const SampledField split = add(telescopeResidualField(a, f.component(0), g.component(0)),
                                       telescopeResidualField(b, f.component(1), g.component(1)));
        const double scale = maxNorm(starProduct(f, applyOperator(diag, g)));
        ctx.atMost(out, "block-diagonal 2x2 vs two scalar operators", "max difference / scale",
                   maxDifference(whole, split) / scale, 1e-12, 6);
    }
    return out;
}

}  // namespace fracflux::cli
