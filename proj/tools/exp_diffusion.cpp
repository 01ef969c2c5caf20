#include <cmath>
#include <numbers>
#include <sstream>

#include "experiments.hpp"
#include "fracflux/classical.hpp"
#include "fracflux/diffusion.hpp"
#include "fracflux/error.hpp"
#include "fracflux/noether.hpp"
#include "fracflux/quadrature.hpp"

namespace fracflux::cli {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

void requireAlphas(const std::vector<double>& alphas, const std::string& where) {
    for (double a : alphas)
        require(a > 0.0 && a < 1.0, ErrorCode::Parse, where + ": every alpha must lie in (0, 1)");
}

// phi_0(x) t^{-alpha} / Gamma(1 - alpha) on the grid of f.
SampledField initialTerm(const Grid& grid, const InitialData& data, double alpha) {
    std::vector<double> exps(grid.rank(), 0.0);
    exps[0] = -alpha;
    const double c = rgamma(1.0 - alpha);
    return SampledField::fromRegular(
        grid, 1, [&](std::span<const double> x, std::size_t) { return c * data(x.subspan(1)); }, exps);
}

// max_t |r| t^alpha Gamma(1 - alpha) / |phi_0|: the residual measured against
// the size of the initial term.
std::pair<double, double> relativeNorms(const SampledField& r, double alpha, double weight) {
    const double c = std::exp(std::lgamma(1.0 - alpha)) / weight;
    double worst = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < r.points(); ++i) {
        const double t = r.grid().coordinate(i, 0);
        const double e = std::abs(r.value(i)) * std::pow(t, alpha) * c;
        worst = std::max(worst, e);
        sq += e * e;
    }
    return {worst, std::sqrt(sq / static_cast<double>(r.points()))};
}

std::vector<AxisSpec> modeAxes(std::size_t nt, double grading, std::size_t dim, double length, std::size_t nx) {
    std::vector<AxisSpec> axes{AxisSpec::fractional(1.0, nt, grading)};
    for (std::size_t d = 0; d < dim; ++d) axes.push_back(AxisSpec::periodic(length, nx));
    return axes;
}

// Residual of D^alpha phi - C Laplace(phi) - phi_0 Phi_{1-alpha} (forward) or
// -D^alpha phi' - C Laplace(phi') + phi'_0 Phi_{1-alpha} (conjugate) on modes.
ResidualReport modeStudy(double alpha, double c, const std::vector<double>& k, bool conjugate,
                         const std::vector<std::size_t>& levels, double grading, double length, std::size_t nx) {
    ResidualReport r;
    DiffusionProblem problem;
    problem.alpha = alpha;
    problem.diffusivity = c;
    problem.dim = k.size();
    problem.initial = InitialData::mode(k);
    for (std::size_t n : levels) {
        const Grid grid(modeAxes(n, grading, k.size(), length, nx));
        const OperatorSpec spec = OperatorSpec::diffusion(alpha, c, grid.axes());
        const SampledField source = initialTerm(grid, problem.initial, alpha);
        SampledField res;
        if (conjugate) {
            double kmax = 0.0;
            for (double v : k) kmax += v * v;
            const SampledField phi = solveConjugate(problem, grid, std::sqrt(kmax) + 1e-9);
            res = add(applyConjugateOperator(spec, phi), source);
        } else {
            const SampledField phi = solve(problem, grid);
            res = subtract(applyOperator(spec, phi), source);
        }
        const auto [m, l2] = relativeNorms(res, alpha, 1.0);
        r.resolutions.push_back(n);
        r.maxNorm.push_back(m);
        r.l2Norm.push_back(l2);
    }
    finalizeReport(r, 1e-12);
    return r;
}

double heatKernel(double c, std::size_t d, double r, double t) {
    return std::exp(-r * r / (4.0 * c * t)) / std::pow(4.0 * std::numbers::pi * c * t, 0.5 * static_cast<double>(d));
}

void massChecks(const Context& ctx, ExperimentOutput& out, const std::vector<double>& alphas, double c,
                std::size_t d) {
    for (double alpha : alphas) {
        double worst = 0.0;
        for (double t : ctx.numbers("mass_times", {0.01, 1.0, 10.0}))
            worst = std::max(worst, std::abs(greensMass(alpha, c, d, t) - 1.0));
        ctx.atMost(out, "green mass d=" + std::to_string(d) + " alpha=" + fmt(alpha), "max |mass - 1|", worst, 1e-6, 5);
    }
}

}  // namespace

ExperimentOutput diffusion1d(const Context& ctx) {
    ExperimentOutput out;
    const auto alphas = ctx.numbers("alphas", {0.3, 0.5, 0.8});
    requireAlphas(alphas, "diffusion-1d");
    const double c = ctx.number("diffusivity", 1.0);
    require(c > 0.0, ErrorCode::Parse, "diffusion-1d.diffusivity must be positive");
    const double k = ctx.number("k", 1.0);
    const double grading = ctx.number("grading", 2.0);
    const auto levels = ctx.sizes("time_resolutions", {256, 512, 1024, 2048});
    const double length = 2.0 * std::numbers::pi;
    const std::size_t nx = 8;

    for (double alpha : alphas) {
        const std::string a = " alpha=" + fmt(alpha);
        const ResidualReport fwd = modeStudy(alpha, c, {k}, false, levels, grading, length, nx);
        ctx.gateDecreasing(out, "mode residual k=" + fmt(k) + a, fwd, 5);
        ctx.gateReport(out, "mode residual k=" + fmt(k) + a, fwd, 1e-4, 0.0, 5, alpha);
        const ResidualReport cnj = modeStudy(alpha, c, {k}, true, levels, grading, length, nx);
        ctx.gateDecreasing(out, "conjugate mode residual k=" + fmt(k) + a, cnj, 0);
        ctx.gateReport(out, "conjugate mode residual k=" + fmt(k) + a, cnj, 1e-4, 0.0, 0, alpha);
    }

    // G(0, t) ~ t^{-alpha/2}: fitted on a dyadic subgrid of the first decade.
    std::vector<double> ts;
    for (int i = 0; i <= 16; ++i) ts.push_back(1e-4 * std::pow(10.0, i / 16.0));
    std::vector<double> exponentAlphas = alphas;
    exponentAlphas.push_back(1.0);
    for (double alpha : exponentAlphas) {
        std::vector<double> v;
        for (double t : ts) v.push_back(greensFunction(alpha, c, 1, 0.0, t));
        const double slope = asymptoticExponent(ts, v);
        ctx.atMost(out, "origin exponent alpha=" + fmt(alpha), "|slope + alpha/2|", std::abs(slope + 0.5 * alpha), 0.02,
                   5, "slope " + fmt(slope));
    }

    massChecks(ctx, out, alphas, c, 1);

    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0})
        for (int i = 0; i <= 50; ++i) {
            const double r = 0.1 * i;
            worst = std::max(worst, std::abs(greensFunction(1.0, c, 1, r, t) - heatKernel(c, 1, r, t)));
        }
    ctx.atMost(out, "alpha=1 heat kernel d=1", "max abs error", worst, 1e-6, 5);

    // alpha = 1 spreads a Gaussian to width sqrt(sigma^2 + 2 C t).
    {
        const double sigma = 0.5;
        const Grid grid({AxisSpec::fractional(1.0, 16), AxisSpec::truncatedLine(16.0, 128)});
        DiffusionProblem p;
        p.alpha = 1.0;
        p.diffusivity = c;
        p.initial = InitialData::gaussian(sigma);
        const SampledField phi = solve(p, grid);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid.coordinate(i, 0);
            const double x = grid.coordinate(i, 1);
            const double s2 = sigma * sigma + 2.0 * c * t;
            const double exact = std::exp(-x * x / (2.0 * s2)) / std::sqrt(2.0 * std::numbers::pi * s2);
            err = std::max(err, std::abs(phi.value(i) - exact));
        }
        ctx.atMost(out, "alpha=1 gaussian sigma=0.5", "max abs error", err, 1e-6, 0);
    }

    // Spectral and Green-convolution paths on periodized Gaussian data.
    for (double alpha : alphas) {
        const Grid grid({AxisSpec::fractional(1.0, 16, grading), AxisSpec::periodic(20.0, 128)});
        DiffusionProblem p;
        p.alpha = alpha;
        p.diffusivity = c;
        p.initial = InitialData::gaussian(0.7);
        SolveOptions spectral;
        spectral.method = SolveMethod::Spectral;
        SolveOptions green;
        green.method = SolveMethod::Green;
        const double diff = maxDifference(solve(p, grid, spectral), solve(p, grid, green));
        ctx.atMost(out, "spectral vs green gaussian alpha=" + fmt(alpha), "max abs difference", diff, 1e-6, 0);
    }

    // Delta data on a truncated line, for plotting.
    {
        const Grid grid({AxisSpec::fractional(1.0, 32, grading), AxisSpec::truncatedLine(12.0, 96)});
        DiffusionProblem p;
        p.alpha = 0.5;
        p.diffusivity = c;
        const SampledField phi = solve(p, grid);
        const Grid wide({AxisSpec::fractional(1.0, 8, grading), AxisSpec::truncatedLine(40.0, 640)});
        const SampledField mass = spatialIntegral(solve(p, wide));
        double worst = 0.0;
        for (std::size_t i = 0; i < mass.points(); ++i) worst = std::max(worst, std::abs(mass.value(i) - 1.0));
        ctx.report(out, "delta alpha=0.5 on the grid", "max |midpoint mass - 1|", worst);
        out.dumps.push_back({"delta alpha=0.5", phi});
    }
    return out;
}

ExperimentOutput diffusionDd(const Context& ctx) {
    ExperimentOutput out;
    const auto alphas = ctx.numbers("alphas", {0.3, 0.5, 0.8});
    requireAlphas(alphas, "diffusion-dd");
    const double c = ctx.number("diffusivity", 1.0);
    require(c > 0.0, ErrorCode::Parse, "diffusion-dd.diffusivity must be positive");
    const double grading = ctx.number("grading", 2.0);

    for (std::size_t d : {2, 3}) {
        massChecks(ctx, out, alphas, c, d);
        double worst = 0.0;
        for (double t : {0.1, 1.0})
            for (int i = 1; i <= 40; ++i) {
                const double r = 0.1 * i;
                const double h = heatKernel(c, d, r, t);
                worst = std::max(worst, std::abs(greensFunction(1.0, c, d, r, t) - h) / heatKernel(c, d, 0.0, t));
            }
        ctx.atMost(out, "alpha=1 heat kernel d=" + std::to_string(d), "max error / peak", worst, 1e-6, 5);
    }

    // Self-similarity G(r, t) = t^{-d alpha/2} G(r t^{-alpha/2}, 1).
    for (double alpha : alphas)
        for (std::size_t d : {1, 2, 3}) {
            double worst = 0.0;
            for (double t : {0.01, 0.1, 10.0})
                for (double r : {0.25, 0.5, 1.0, 2.0}) {
                    const double lhs = greensFunction(alpha, c, d, r, t);
                    const double rhs = std::pow(t, -0.5 * alpha * static_cast<double>(d)) *
                                       greensFunction(alpha, c, d, r * std::pow(t, -0.5 * alpha), 1.0);
                    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
                }
            ctx.atMost(out, "self-similarity d=" + std::to_string(d) + " alpha=" + fmt(alpha), "max relative error",
                       worst, 1e-6, 0);
        }

    // Plane-wave mode in 2+1.
    const auto levels = ctx.sizes("time_resolutions", {64, 128, 256, 512});
    for (double alpha : alphas) {
        const ResidualReport r = modeStudy(alpha, c, {1.0, 2.0}, false, levels, grading, 2.0 * std::numbers::pi, 8);
        ctx.gateDecreasing(out, "mode residual 2+1 k=(1,2) alpha=" + fmt(alpha), r, 0);
        ctx.gateReport(out, "mode residual 2+1 k=(1,2) alpha=" + fmt(alpha), r, 1e-3, 0.0, 0, alpha);
    }

    // Spectral delta on a periodic box against G away from the source. The
    // Fourier series of G converges slowly (E_alpha decays like k^{-2}), so
    // this is reported only.
    for (double alpha : alphas) {
        const std::size_t nx = ctx.sizes("box_nodes", {64, 128}).back();
        const double length = 16.0;
        const Grid grid({AxisSpec::fractional(1.0, 8), AxisSpec::periodic(length, nx), AxisSpec::periodic(length, nx)});
        DiffusionProblem p;
        p.alpha = alpha;
        p.diffusivity = c;
        p.dim = 2;
        const SampledField spec = solve(p, grid);
        double worst = 0.0;
        double peak = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid.coordinate(i, 1);
            const double y = grid.coordinate(i, 2);
            const double r = std::hypot(x, y);
            if (grid.indexAlong(i, 0) + 1 != grid.extent(0) || r < 1.0 || r > 3.0) continue;
            const double g = greensFunction(alpha, c, 2, r, grid.coordinate(i, 0));
            worst = std::max(worst, std::abs(spec.value(i) - g));
            peak = std::max(peak, g);
        }
        ctx.report(out, "spectral vs green delta 2+1 alpha=" + fmt(alpha), "max error / max G at t=1 on 1<=r<=3",
                   worst / peak);
    }

    // Rotations commute with the operator: Lambda(M phi) = M(Lambda phi). The
    // finite-difference stencils commute as well, so this holds to round-off.
    {
        ResidualReport r;
        const double alpha = 0.5;
        for (std::size_t nx : ctx.sizes("rotation_nodes", {32, 64, 128})) {
            const Grid grid({AxisSpec::fractional(1.0, 16, grading), AxisSpec::truncatedLine(8.0, nx),
                             AxisSpec::truncatedLine(8.0, nx)});
            const OperatorSpec spec = OperatorSpec::diffusion(alpha, c, grid.axes());
            const auto phi = SampledField::fromFunction(grid, 1, [](std::span<const double> x, std::size_t) {
                return Complex(std::exp(-(x[1] - 0.5) * (x[1] - 0.5) - 0.5 * x[2] * x[2]) * (1.0 + x[0]));
            });
            const Symmetry m = Symmetry::rotation(1, 2);
            const SampledField rhs = applySymmetry(m, applyOperator(spec, phi));
            const SampledField diff = subtract(applyOperator(spec, applySymmetry(m, phi)), rhs);
            const PointMask inner = [](const Grid& g, std::size_t i) {
                return std::abs(g.coordinate(i, 1)) <= 2.5 && std::abs(g.coordinate(i, 2)) <= 2.5;
            };
            const double scale = maxNorm(rhs, inner);
            r.resolutions.push_back(nx);
            r.maxNorm.push_back(maxNorm(diff, inner) / scale);
            r.l2Norm.push_back(l2Norm(diff, inner) / scale);
        }
        finalizeReport(r, 1e-10);
        ctx.gateReport(out, "rotation commutator 2+1", r, 1e-10, 0.0, 0, alpha);
    }
    return out;
}

}  // namespace fracflux::cli
