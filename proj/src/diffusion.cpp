#include "fracflux/diffusion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fracflux/error.hpp"
#include "fracflux/laplace_inversion.hpp"
#include "fracflux/mittag_leffler.hpp"
#include "fracflux/quadrature.hpp"
#include "fracflux/special.hpp"

namespace fracflux {

namespace {

constexpr int kGreenNodes = 64;
constexpr double kTailScale = 60.0;

using C = std::complex<double>;

struct Layout {
    std::size_t timeAxis = 0;
    std::vector<std::size_t> space;
    std::vector<std::size_t> spatialBase;  // flat index of (t_0, s) for each spatial point s
};

Layout layoutOf(const Grid& grid, std::size_t dim) {
    const auto frac = grid.fractionalAxes();
    require(frac.size() == 1, ErrorCode::AxisRole, "diffusion grids need exactly one fractional (time) axis");
    Layout l;
    l.timeAxis = frac[0];
    l.space = grid.classicalAxes();
    require(l.space.size() == dim, ErrorCode::ShapeMismatch,
            "diffusion grid must have one classical axis per space dimension");
    for (std::size_t p = 0; p < grid.size(); ++p)
        if (grid.indexAlong(p, l.timeAxis) == 0) l.spatialBase.push_back(p);
    return l;
}

std::vector<double> spatialPoint(const Grid& grid, const Layout& l, std::size_t base) {
    std::vector<double> x;
    for (std::size_t a : l.space) x.push_back(grid.coordinate(base, a));
    return x;
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

// e^w - 1 without cancellation for small |w|.
C expm1(C w) {
    if (std::abs(w) > 0.5) return std::exp(w) - 1.0;
    C term = w;
    C sum = w;
    for (int n = 2; n < 30 && std::abs(term) > 1e-17 * std::abs(sum); ++n) {
        term *= w / static_cast<double>(n);
        sum += term;
    }
    return sum;
}

bool allPeriodic(const Grid& grid, const Layout& l) {
    return std::all_of(l.space.begin(), l.space.end(),
                       [&](std::size_t a) { return grid.axis(a).topology == Topology::Periodic; });
}

// Wave numbers of each spatial point in FFT order, per axis.
std::vector<std::vector<double>> waveNumbers(const Grid& grid, const Layout& l) {
    std::vector<std::vector<double>> k;
    for (std::size_t a : l.space) {
        const std::size_t n = grid.extent(a);
        std::vector<double> ka(n);
        for (std::size_t j = 0; j < n; ++j) {
            const long w = j <= n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
            ka[j] = 2.0 * std::numbers::pi * static_cast<double>(w) / grid.axis(a).length;
        }
        k.push_back(std::move(ka));
    }
    return k;
}

// Multi-dimensional FFT over the space axes; multipliers depend on |k| only.
class SpectralBox {
  public:
    SpectralBox(const Grid& grid, const Layout& l) {
        for (std::size_t a : l.space) dims_.push_back(static_cast<int>(grid.extent(a)));
        size_ = l.spatialBase.size();
        const auto k = waveNumbers(grid, l);
        k2_.resize(size_);
        edge_.resize(size_);
        for (std::size_t s = 0; s < size_; ++s) {
            std::size_t rem = s;
            double k2 = 0.0;
            bool edge = false;
            for (std::size_t d = l.space.size(); d-- > 0;) {
                const std::size_t n = static_cast<std::size_t>(dims_[d]);
                const std::size_t j = rem % n;
                rem /= n;
                k2 += k[d][j] * k[d][j];
                const std::size_t dist = std::min(j, n - j);
                edge = edge || dist + 1 >= n / 2;
            }
            k2_[s] = k2;
            edge_[s] = edge;
        }
    }

    std::vector<C> forward(std::vector<C> data) const { return transform(std::move(data), FFTW_FORWARD); }
    std::vector<C> backward(std::vector<C> data) const {
        auto out = transform(std::move(data), FFTW_BACKWARD);
        for (auto& v : out) v /= static_cast<double>(size_);
        return out;
    }

    double k2(std::size_t s) const { return k2_[s]; }
    bool edge(std::size_t s) const { return edge_[s]; }
    std::size_t size() const { return size_; }

  private:
    std::vector<C> transform(std::vector<C> data, int sign) const {
        auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
        fftw_plan plan = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), ptr, ptr, sign, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
        return data;
    }

    std::vector<int> dims_;
    std::size_t size_ = 0;
    std::vector<double> k2_;
    std::vector<bool> edge_;
};

double cellVolume(const Grid& grid, const Layout& l) {
    double v = 1.0;
    for (std::size_t a : l.space) v *= grid.axis(a).spacing();
    return v;
}

std::vector<C> sampledInitial(const DiffusionProblem& pb, const Grid& grid, const Layout& l) {
    std::vector<C> v(l.spatialBase.size());
    if (pb.initial.kind == InitialData::Kind::Delta) {
        bool placed = false;
        for (std::size_t s = 0; s < v.size(); ++s) {
            if (norm2(spatialPoint(grid, l, l.spatialBase[s])) == 0.0) {
                v[s] = pb.initial.weight / cellVolume(grid, l);
                placed = true;
            }
        }
        require(placed, ErrorCode::Precondition, "discrete delta needs a grid node at the origin");
        return v;
    }
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = pb.initial(spatialPoint(grid, l, l.spatialBase[s]));
    return v;
}

void requireResolved(const DiffusionProblem& pb, const SpectralBox& box, const std::vector<C>& hat,
                     double tolerance) {
    if (pb.initial.kind != InitialData::Kind::Gaussian) return;
    double peak = 0.0;
    double tail = 0.0;
    for (std::size_t s = 0; s < hat.size(); ++s) {
        peak = std::max(peak, std::abs(hat[s]));
        if (box.edge(s)) tail = std::max(tail, std::abs(hat[s]));
    }
    require(tail <= tolerance * peak, ErrorCode::Domain,
            "initial data is not resolved: spectral tail " + std::to_string(tail / peak));
}

double exponentFor(const DiffusionProblem& pb) {
    return pb.initial.kind == InitialData::Kind::Delta ? -pb.alpha / 2.0 : 0.0;
}

// Writes values (time-major per spatial point) into a field with the given time exponent.
SampledField assemble(const Grid& grid, const Layout& l, double exponent,
                      const std::function<C(std::size_t s, std::size_t i)>& value) {
    SampledField f(grid, 1);
    f.setExponent(l.timeAxis, exponent);
    const std::size_t nt = grid.extent(l.timeAxis);
    const std::size_t stride = grid.stride(l.timeAxis);
    for (std::size_t i = 0; i < nt; ++i) {
        const double w = std::pow(grid.axis(l.timeAxis).coordinate(i), -exponent);
        for (std::size_t s = 0; s < l.spatialBase.size(); ++s)
            f.regularRef(l.spatialBase[s] + i * stride) = w * value(s, i);
    }
    f.ensureFinite("diffusion");
    return f;
}

SampledField planeWave(const DiffusionProblem& pb, const Grid& grid, const Layout& l, double sign) {
    const auto& k = pb.initial.k;
    require(k.size() == pb.dim, ErrorCode::ShapeMismatch, "mode data needs one wave number per space axis");
    for (std::size_t d = 0; d < pb.dim; ++d) {
        const AxisSpec& ax = grid.axis(l.space[d]);
        if (ax.topology != Topology::Periodic) continue;
        const double cycles = k[d] * ax.length / (2.0 * std::numbers::pi);
        require(std::abs(cycles - std::round(cycles)) < 1e-9, ErrorCode::Domain,
                "wave number is not a mode of the periodic box");
    }
    double k2 = 0.0;
    for (double v : k) k2 += v * v;
    const double omega = sign * pb.diffusivity * k2;
    const std::size_t nt = grid.extent(l.timeAxis);
    std::vector<double> e(nt);
    for (std::size_t i = 0; i < nt; ++i)
        e[i] = mlEval(pb.alpha, omega * std::pow(grid.axis(l.timeAxis).coordinate(i), pb.alpha));
    return assemble(grid, l, 0.0, [&](std::size_t s, std::size_t i) {
        return pb.initial(spatialPoint(grid, l, l.spatialBase[s])) * e[i];
    });
}

SampledField spectralSolve(const DiffusionProblem& pb, const Grid& grid, const Layout& l, double tail) {
    require(allPeriodic(grid, l), ErrorCode::AxisRole, "spectral propagation needs periodic space axes");
    const SpectralBox box(grid, l);
    const std::vector<C> hat = box.forward(sampledInitial(pb, grid, l));
    requireResolved(pb, box, hat, tail);
    const std::size_t nt = grid.extent(l.timeAxis);
    std::vector<std::vector<C>> values(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const double ta = std::pow(grid.axis(l.timeAxis).coordinate(i), pb.alpha);
        std::vector<C> h(hat.size());
        for (std::size_t s = 0; s < hat.size(); ++s) h[s] = hat[s] * mlEval(pb.alpha, -pb.diffusivity * box.k2(s) * ta);
        values[i] = box.backward(std::move(h));
    }
    return assemble(grid, l, exponentFor(pb), [&](std::size_t s, std::size_t i) { return values[i][s]; });
}

// Green's function at many radii for one t, sharing equal radii.
class GreenCache {
  public:
    GreenCache(const DiffusionProblem& pb, double t) : pb_(pb), t_(t) {}
    double operator()(double r) {
        const long long key = std::llround(r * 1e12);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double g = greensFunction(pb_.alpha, pb_.diffusivity, pb_.dim, r, t_);
        cache_.emplace(key, g);
        return g;
    }

  private:
    const DiffusionProblem& pb_;
    double t_;
    std::map<long long, double> cache_;
};

SampledField deltaGreenSolve(const DiffusionProblem& pb, const Grid& grid, const Layout& l) {
    const std::size_t nt = grid.extent(l.timeAxis);
    std::vector<double> radius(l.spatialBase.size());
    for (std::size_t s = 0; s < radius.size(); ++s) {
        radius[s] = std::sqrt(norm2(spatialPoint(grid, l, l.spatialBase[s])));
        require(radius[s] > 0.0 || pb.dim == 1, ErrorCode::Precondition,
                "delta data needs grids without a node at the origin in d >= 2");
    }
    std::vector<std::vector<double>> values(nt, std::vector<double>(radius.size()));
#pragma omp parallel for schedule(dynamic)
    for (long ii = 0; ii < static_cast<long>(nt); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        GreenCache green(pb, grid.axis(l.timeAxis).coordinate(i));
        for (std::size_t s = 0; s < radius.size(); ++s) values[i][s] = pb.initial.weight * green(radius[s]);
    }
    return assemble(grid, l, exponentFor(pb), [&](std::size_t s, std::size_t i) { return values[i][s]; });
}

// Composite Gauss-Legendre nodes on [0, kTailScale * ell] with panel width at
// most `width`.
GaussRule radialRule(double ell, double width) {
    const GaussRule unit = gaussLegendre(16, 0.0, 1.0);
    GaussRule rule;
    const double end = kTailScale * ell;
    // Geometric panels resolve the r -> 0 behaviour of the kernels in d >= 2.
    std::vector<double> cuts = {0.0};
    for (double c = 1e-6 * ell; c < std::min(width, end); c *= 10.0) cuts.push_back(c);
    for (double c = std::min(width, end); c < end; c += width) cuts.push_back(c);
    cuts.push_back(end);
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p];
        const double b = cuts[p + 1];
        if (b <= a) continue;
        for (std::size_t k = 0; k < unit.nodes.size(); ++k) {
            rule.nodes.push_back(a + (b - a) * unit.nodes[k]);
            rule.weights.push_back((b - a) * unit.weights[k]);
        }
    }
    return rule;
}

SampledField gaussianGreenSolve(const DiffusionProblem& pb, const Grid& grid, const Layout& l) {
    require(pb.dim == 1, ErrorCode::Precondition, "Green convolution of smooth data is implemented for d = 1");
    const AxisSpec& ax = grid.axis(l.space[0]);
    const bool periodic = ax.topology == Topology::Periodic;
    const std::size_t nt = grid.extent(l.timeAxis);
    std::vector<double> x(l.spatialBase.size());
    for (std::size_t s = 0; s < x.size(); ++s) x[s] = grid.coordinate(l.spatialBase[s], l.space[0]);

    auto profile = [&](double y) {
        std::vector<double> pt{y};
        if (!periodic) return pb.initial(pt);
        C sum{};
        const int images = 2 + static_cast<int>(std::ceil((10.0 * pb.initial.sigma) / ax.length));
        for (int m = -images; m <= images; ++m) {
            pt[0] = y + m * ax.length;
            sum += pb.initial(pt);
        }
        return sum;
    };

    std::vector<std::vector<C>> values(nt, std::vector<C>(x.size()));
#pragma omp parallel for schedule(dynamic)
    for (long ii = 0; ii < static_cast<long>(nt); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double t = grid.axis(l.timeAxis).coordinate(i);
        const double ell = std::sqrt(pb.diffusivity) * std::pow(t, pb.alpha / 2.0);
        const GaussRule rule = radialRule(ell, 0.5 * std::min(ell, pb.initial.sigma));
        std::vector<double> g(rule.nodes.size());
        for (std::size_t q = 0; q < g.size(); ++q) g[q] = rule.weights[q] * greensFunction(pb.alpha, pb.diffusivity, 1, rule.nodes[q], t);
        for (std::size_t s = 0; s < x.size(); ++s) {
            std::vector<C> terms(g.size());
            for (std::size_t q = 0; q < g.size(); ++q)
                terms[q] = g[q] * (profile(x[s] - rule.nodes[q]) + profile(x[s] + rule.nodes[q]));
            values[i][s] = pairwiseSum(std::span<const C>(terms));
        }
    }
    return assemble(grid, l, 0.0, [&](std::size_t s, std::size_t i) { return values[i][s]; });
}

}  // namespace

InitialData InitialData::delta(double weight) {
    InitialData d;
    d.kind = Kind::Delta;
    d.weight = weight;
    return d;
}

InitialData InitialData::gaussian(double sigma, double weight) {
    InitialData d;
    d.kind = Kind::Gaussian;
    d.sigma = sigma;
    d.weight = weight;
    return d;
}

InitialData InitialData::mode(std::vector<double> k, double weight) {
    InitialData d;
    d.kind = Kind::FourierMode;
    d.k = std::move(k);
    d.weight = weight;
    return d;
}

Complex InitialData::operator()(std::span<const double> x) const {
    switch (kind) {
        case Kind::Delta: throw Error(ErrorCode::Precondition, "delta data has no pointwise profile");
        case Kind::Gaussian: {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            const double d = static_cast<double>(x.size());
            return weight * std::pow(2.0 * std::numbers::pi * sigma * sigma, -d / 2.0) *
                   std::exp(-r2 / (2.0 * sigma * sigma));
        }
        case Kind::FourierMode: {
            double phase = 0.0;
            for (std::size_t i = 0; i < x.size() && i < k.size(); ++i) phase += k[i] * x[i];
            return weight * std::polar(1.0, phase);
        }
    }
    return {};
}

void DiffusionProblem::validate() const {
    require(alpha > 0.0 && alpha <= 1.0, ErrorCode::Domain, "diffusion order alpha must lie in (0, 1]");
    require(diffusivity > 0.0, ErrorCode::Domain, "diffusivity must be positive");
    require(dim >= 1 && dim <= 3, ErrorCode::Domain, "space dimension must be 1, 2 or 3");
    if (initial.kind == InitialData::Kind::Gaussian)
        require(initial.sigma > 0.0, ErrorCode::Domain, "Gaussian width must be positive");
}

GreenEvaluation greensFunctionWithError(double alpha, double diffusivity, std::size_t d, double r, double t) {
    require(t > 0.0, ErrorCode::Domain, "Green's function needs t > 0");
    require(alpha > 0.0 && alpha <= 1.0, ErrorCode::Domain, "Green's function needs alpha in (0, 1]");
    require(diffusivity > 0.0, ErrorCode::Domain, "diffusivity must be positive");
    require(d >= 1 && d <= 3, ErrorCode::Domain, "space dimension must be 1, 2 or 3");
    require(r >= 0.0, ErrorCode::Domain, "radius must be non-negative");
    require(r > 0.0 || d == 1, ErrorCode::Domain, "G(0, t) diverges for d >= 2");

    // d = 3 near the origin: the 1/(4 pi r) part of the transform is inverted
    // exactly, the contour only sees the remainder.
    const bool split = d == 3 && r < std::sqrt(diffusivity) * std::pow(t, alpha / 2.0);
    const auto F = [=](C s) -> C {
        const C sa = std::pow(s, alpha);
        const C kappa = std::sqrt(sa / diffusivity);
        C h;
        if (d == 1) h = std::exp(-kappa * r) / (2.0 * kappa);
        else if (d == 2) h = besselK0(kappa * r) / (2.0 * std::numbers::pi);
        else h = (split ? expm1(-kappa * r) : std::exp(-kappa * r)) / (4.0 * std::numbers::pi * r);
        return sa / s * h / diffusivity;
    };
    InversionResult inv = invertLaplace(F, t, kGreenNodes);
    if (split) inv.value += std::pow(t, -alpha) * rgamma(1.0 - alpha) / (4.0 * std::numbers::pi * r * diffusivity);
    const double scale = std::pow(diffusivity * std::pow(t, alpha), -static_cast<double>(d) / 2.0);
    require(inv.errorEstimate <= 1e-8 * std::max(scale, std::abs(inv.value)), ErrorCode::NonConvergence,
            "Green's function inversion did not converge (estimate " + std::to_string(inv.errorEstimate) + ")");
    return {inv.value, inv.errorEstimate};
}

double greensFunction(double alpha, double diffusivity, std::size_t d, double r, double t) {
    return greensFunctionWithError(alpha, diffusivity, d, r, t).value;
}

double greensMass(double alpha, double diffusivity, std::size_t d, double t) {
    const double ell = std::sqrt(diffusivity) * std::pow(t, alpha / 2.0);
    const GaussRule rule = radialRule(ell, 0.5 * ell);
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t q = 0; q < terms.size(); ++q) {
        const double r = rule.nodes[q];
        const double shell = d == 1 ? 2.0 : d == 2 ? 2.0 * std::numbers::pi * r : 4.0 * std::numbers::pi * r * r;
        terms[q] = rule.weights[q] * shell * greensFunction(alpha, diffusivity, d, r, t);
    }
    return pairwiseSum(std::span<const double>(terms));
}

SampledField solve(const DiffusionProblem& pb, const Grid& grid, const SolveOptions& options) {
    pb.validate();
    const Layout l = layoutOf(grid, pb.dim);
    if (pb.initial.kind == InitialData::Kind::FourierMode) return planeWave(pb, grid, l, -1.0);
    SolveMethod method = options.method;
    if (method == SolveMethod::Auto) method = allPeriodic(grid, l) ? SolveMethod::Spectral : SolveMethod::Green;
    if (method == SolveMethod::Spectral) return spectralSolve(pb, grid, l, options.spectralTail);
    return pb.initial.kind == InitialData::Kind::Delta ? deltaGreenSolve(pb, grid, l)
                                                       : gaussianGreenSolve(pb, grid, l);
}

SampledField solveConjugate(const DiffusionProblem& pb, const Grid& grid, double bandLimit) {
    pb.validate();
    const Layout l = layoutOf(grid, pb.dim);
    const double tmax = grid.axis(l.timeAxis).coordinate(grid.extent(l.timeAxis) - 1);
    const double growth = pb.diffusivity * bandLimit * bandLimit * std::pow(tmax, pb.alpha);
    require(growth <= mlOverflowThreshold(pb.alpha), ErrorCode::Overflow,
            "conjugate solution overflows: C K^2 T^alpha exceeds the Mittag-Leffler range");
    if (pb.initial.kind == InitialData::Kind::FourierMode) {
        double k2 = 0.0;
        for (double v : pb.initial.k) k2 += v * v;
        require(k2 <= bandLimit * bandLimit * (1.0 + 1e-12), ErrorCode::Domain, "mode lies outside the band limit");
        return planeWave(pb, grid, l, 1.0);
    }
    require(allPeriodic(grid, l), ErrorCode::AxisRole, "band-limited conjugates need periodic space axes");
    const SpectralBox box(grid, l);
    const std::vector<C> hat = box.forward(sampledInitial(pb, grid, l));
    const std::size_t nt = grid.extent(l.timeAxis);
    std::vector<std::vector<C>> values(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const double ta = std::pow(grid.axis(l.timeAxis).coordinate(i), pb.alpha);
        std::vector<C> h(hat.size());
        for (std::size_t s = 0; s < hat.size(); ++s) {
            if (box.k2(s) > bandLimit * bandLimit * (1.0 + 1e-12)) continue;
            h[s] = hat[s] * mlEval(pb.alpha, pb.diffusivity * box.k2(s) * ta);
        }
        values[i] = box.backward(std::move(h));
    }
    return assemble(grid, l, 0.0, [&](std::size_t s, std::size_t i) { return values[i][s]; });
}

double asymptoticExponent(std::span<const double> t, std::span<const double> v) {
    require(t.size() == v.size(), ErrorCode::ShapeMismatch, "time and value series differ in length");
    require(!t.empty(), ErrorCode::Precondition, "empty series");
    const double t0 = *std::min_element(t.begin(), t.end());
    require(t0 > 0.0, ErrorCode::Domain, "times must be positive");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        require(v[i] > 0.0, ErrorCode::Domain, "asymptotic exponent needs positive values");
        if (t[i] <= 10.0 * t0 * (1.0 + 1e-12)) {
            lx.push_back(std::log(t[i]));
            ly.push_back(std::log(v[i]));
        }
    }
    require(lx.size() >= 8, ErrorCode::Precondition, "asymptotic exponent needs at least 8 samples in the first decade");
    const double n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace fracflux
