#include "fracflux/mittag_leffler.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracflux/error.hpp"
#include "fracflux/quadrature.hpp"

namespace fracflux {

namespace {

constexpr double kLogMax = 700.0;

void requireAlpha(double alpha) {
    require(alpha > 0.0 && alpha <= 2.0, ErrorCode::Domain, "Mittag-Leffler order must lie in (0, 2]");
}

double seriesPositive(double alpha, double z) {
    // log-space terms n log z - lgamma(alpha n + 1), summed relative to the peak
    const double lz = std::log(z);
    std::vector<double> logs;
    double peak = -std::numeric_limits<double>::infinity();
    for (int n = 0;; ++n) {
        const double l = n * lz - std::lgamma(alpha * n + 1.0);
        logs.push_back(l);
        peak = std::max(peak, l);
        if (n > 4 && l < peak - 45.0 && l < logs[logs.size() - 2]) break;
        require(n < 200000, ErrorCode::NonConvergence, "Mittag-Leffler series did not converge");
    }
    std::vector<double> terms;
    terms.reserve(logs.size());
    for (double l : logs) terms.push_back(std::exp(l - peak));
    return std::exp(peak) * pairwiseSum(std::span<const double>(terms));
}

double seriesNegative(double alpha, double z) {
    long double sum = 0.0L;
    long double zn = 1.0L;
    const long double lz = z;
    long double prevAbs = 0.0L;
    for (int n = 0; n < 2000; ++n) {
        const long double term = zn / std::tgamma(static_cast<long double>(alpha) * n + 1.0L);
        sum += term;
        const long double a = std::fabs(term);
        if (n > 4 && a < 1e-22L * std::fabs(sum) && a <= prevAbs) break;
        prevAbs = a;
        zn *= lz;
    }
    return static_cast<double>(sum);
}

// Residue sum of e^s F(s) at the poles s^alpha = z, z < 0, for 1 < alpha < 2.
double poleTerms(double alpha, double z) {
    const std::complex<double> s = std::polar(std::pow(-z, 1.0 / alpha), std::numbers::pi / alpha);
    return 2.0 / alpha * std::exp(s).real();
}

// Panels on [a, b] refined geometrically toward a (and toward b when both).
void gradedPanels(double a, double b, bool towardB, const GaussRule& rule, const std::function<double(double)>& f,
                  double& sum) {
    if (!(b > a)) return;
    const double mid = towardB ? 0.5 * (a + b) : b;
    std::vector<double> edges{a};
    for (int k = 40; k >= 0; --k) edges.push_back(a + (mid - a) * std::ldexp(1.0, -k));
    if (towardB)
        for (int k = 1; k <= 41; ++k) edges.push_back(b - (b - mid) * std::ldexp(1.0, -k));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i];
        const double h = edges[i + 1] - lo;
        if (h <= 0.0) continue;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) sum += h * rule.weights[j] * f(lo + h * rule.nodes[j]);
    }
}

// z < 0: with c = |z|^{1/alpha},
// E_alpha(z) = sin(alpha pi)/(alpha pi) int_0^inf e^{-c v^{1/alpha}} / (v^2 + 2 v cos(alpha pi) + 1) dv
//            [+ (2/alpha) e^{c cos(pi/alpha)} cos(c sin(pi/alpha)) for 1 < alpha < 2].
// (The parabolic Laplace contour loses digits near alpha = 1 and next to the poles.)
double realLine(double alpha, double z) {
    const double c = std::pow(-z, 1.0 / alpha);
    const double sn = std::sin(alpha * std::numbers::pi);
    const double cs = std::cos(alpha * std::numbers::pi);
    const auto f = [=](double v) { return std::exp(-c * std::pow(v, 1.0 / alpha)) / ((v + cs) * (v + cs) + sn * sn); };
    const GaussRule rule = gaussLegendre(16, 0.0, 1.0);
    const double vmax = std::pow(45.0 / c, alpha);
    const double peak = -cs;
    double sum = 0.0;
    if (peak > 0.0 && peak < vmax) {
        gradedPanels(0.0, peak, true, rule, f, sum);
        gradedPanels(peak, vmax, false, rule, f, sum);
    } else {
        gradedPanels(0.0, vmax, false, rule, f, sum);
    }
    return sn / (alpha * std::numbers::pi) * sum + (alpha > 1.0 ? poleTerms(alpha, z) : 0.0);
}

double asymptotic(double alpha, double z) {
    // E_alpha(z) ~ -sum_{k>=1} z^{-k} / Gamma(1 - alpha k), truncated where the
    // envelope |z|^{-k} Gamma(alpha k) / pi of the terms stops decreasing.
    const double lz = std::log(std::abs(z));
    double sum = 0.0;
    double prevEnvelope = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 400; ++k) {
        const double envelope = std::lgamma(alpha * k) - k * lz;
        if (envelope > prevEnvelope) break;
        prevEnvelope = envelope;
        sum -= std::pow(z, -k) * rgamma(1.0 - alpha * k);
        if (std::exp(envelope) < 1e-18 * std::abs(sum)) break;
    }
    if (alpha > 1.0) sum += poleTerms(alpha, z);
    return sum;
}

}  // namespace

double mlOverflowThreshold(double alpha) {
    requireAlpha(alpha);
    return std::pow(kLogMax, alpha);
}

double mlSeriesSwitch(double alpha) {
    requireAlpha(alpha);
    return std::pow(4.0, alpha);
}

double mlAsymptoticSwitch(double alpha) {
    requireAlpha(alpha);
    return std::pow(40.0, alpha);
}

double mlEvalWith(double alpha, double z, MLMethod method) {
    requireAlpha(alpha);
    require(std::isfinite(z), ErrorCode::Domain, "Mittag-Leffler argument must be finite");
    if (z > mlOverflowThreshold(alpha)) {
        std::ostringstream msg;
        msg << "E_" << alpha << "(" << z << ") overflows; argument must not exceed " << mlOverflowThreshold(alpha);
        throw Error(ErrorCode::Overflow, msg.str());
    }
    if (method == MLMethod::Auto) {
        if (z == 0.0) return 1.0;
        if (alpha == 1.0) return std::exp(z);
        if (alpha == 2.0) return z < 0.0 ? std::cos(std::sqrt(-z)) : std::cosh(std::sqrt(z));
        if (z > 0.0) return seriesPositive(alpha, z);
        const double a = -z;
        if (a <= mlSeriesSwitch(alpha)) return seriesNegative(alpha, z);
        if (a <= mlAsymptoticSwitch(alpha)) return realLine(alpha, z);
        return asymptotic(alpha, z);
    }
    switch (method) {
        case MLMethod::Series: return z > 0.0 ? seriesPositive(alpha, z) : seriesNegative(alpha, z);
        case MLMethod::Integral:
            require(z < 0.0, ErrorCode::Domain, "integral representation needs z < 0");
            return realLine(alpha, z);
        case MLMethod::Asymptotic:
            require(z < 0.0, ErrorCode::Domain, "asymptotic representation needs z < 0");
            return asymptotic(alpha, z);
        case MLMethod::Auto: break;
    }
    return mlEval(alpha, z);
}

double mlEval(double alpha, double z) { return mlEvalWith(alpha, z, MLMethod::Auto); }

SampledField modeSolution(double k, double alpha, double lambda2, ModeBranch branch, const Grid& grid) {
    require(alpha > 0.0 && alpha <= 2.0, ErrorCode::Domain, "modeSolution: alpha must lie in (0, 2]");
    const auto frac = grid.fractionalAxes();
    const auto cls = grid.classicalAxes();
    require(frac.size() == 1 && cls.size() == 1, ErrorCode::AxisRole,
            "modeSolution needs one fractional and one classical axis");
    const std::size_t ta = frac[0];
    const std::size_t xa = cls[0];
    const AxisSpec& xs = grid.axis(xa);
    if (xs.topology == Topology::Periodic) {
        const double cycles = k * xs.length / (2.0 * std::numbers::pi);
        require(std::abs(cycles - std::round(cycles)) < 1e-9, ErrorCode::Domain,
                "modeSolution: wavenumber is not a mode of the periodic box");
    }
    const double omega = (branch == ModeBranch::Forward ? -1.0 : 1.0) * lambda2 * k * k;
    const double tmax = grid.axis(ta).coordinate(grid.extent(ta) - 1);
    if (omega > 0.0)
        require(omega * std::pow(tmax, alpha) <= mlOverflowThreshold(alpha), ErrorCode::Overflow,
                "modeSolution: conjugate mode overflows on this time range");

    std::vector<double> e(grid.extent(ta));
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = mlEval(alpha, omega * std::pow(grid.axis(ta).coordinate(i), alpha));
    SampledField f(grid, 1);
    for (std::size_t p = 0; p < grid.size(); ++p)
        f.regularRef(p) = std::polar(1.0, k * grid.coordinate(p, xa)) * e[grid.indexAlong(p, ta)];
    return f;
}

}  // namespace fracflux
