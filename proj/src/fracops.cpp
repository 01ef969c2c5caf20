#include "fracflux/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracflux/error.hpp"
#include "fracflux/interpolation.hpp"

namespace fracflux {

namespace {

constexpr double kExponentEps = 1e-12;

void requireFractionalAxis(const SampledField& f, std::size_t axis, const char* op) {
    require(axis < f.grid().rank(), ErrorCode::ShapeMismatch, std::string(op) + ": axis out of range");
    require(f.grid().axis(axis).isFractional(), ErrorCode::AxisRole,
            std::string(op) + ": axis is not fractional");
}

// Regular factor divided by t, exponent raised by one. Used when an Euler
// factor annihilates the leading power so the representation stays integrable.
SampledField absorbVanishingFactor(const SampledField& f, std::size_t axis) {
    SampledField out = f;
    out.setExponent(axis, f.exponent(axis) + 1.0);
    const Grid& grid = f.grid();
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double t = grid.coordinate(p, axis);
        for (std::size_t c = 0; c < f.components(); ++c) out.regularRef(p, c) /= t;
    }
    return out;
}

SampledField zeroLike(const SampledField& f) { return scale(f, 0.0); }

SampledField integralOrIdentity(const SampledField& f, double nu, std::size_t axis,
                                const ConvolutionOptions& options) {
    return nu == 0.0 ? f : fracIntegral(f, nu, axis, options);
}

SampledField shiftedOrZero(const SampledField& f, double nu, std::size_t axis, ShiftKind kind,
                           const ConvolutionOptions& options) {
    return nu == 0.0 ? zeroLike(f) : shiftedOp(f, nu, axis, kind, options);
}

void requireLemma(const SampledField& f, double nu, std::size_t axis, const char* which) {
    const LemmaCheck check = lemmaProxy(f, nu, axis);
    require(check.satisfied, ErrorCode::Precondition,
            std::string("limit conditions fail for ") + which + ": " + check.detail);
}

}  // namespace

SampledField fracIntegral(const SampledField& f, double nu, std::size_t axis, const ConvolutionOptions& options) {
    requireFractionalAxis(f, axis, "fracIntegral");
    require(nu > 0.0, ErrorCode::Precondition, "fracIntegral: order must be positive");
    require(f.exponent(axis) > -1.0, ErrorCode::Precondition,
            "fracIntegral: singularity exponent must exceed -1");
    return laplaceConvolve(powerKernel(f.grid(), axis, nu), f, axis, options);
}

SampledField fracDerivative(const SampledField& f, double nu, std::size_t axis, const ConvolutionOptions& options) {
    requireFractionalAxis(f, axis, "fracDerivative");
    require(nu >= 0.0, ErrorCode::Precondition, "fracDerivative: negative order, use fracIntegral");
    require(nu < kMaxDerivativeOrder, ErrorCode::Precondition, "fracDerivative: order must be below 2");
    if (nu == 0.0) return f;
    const double p = f.exponent(axis);
    require(p > -1.0, ErrorCode::Precondition, "fracDerivative: singularity exponent must exceed -1");

    const double m = std::floor(nu);
    const double mu = m + 1.0 - nu;
    const double q = p + mu;
    double c0 = q;
    double c1 = 1.0;
    double c2 = 0.0;
    bool vanishing = std::abs(q) < kExponentEps;
    if (m >= 1.0) {
        c0 = q * (q - 1.0);
        c1 = 2.0 * q - 1.0;
        c2 = 1.0;
        vanishing = vanishing || std::abs(q - 1.0) < kExponentEps;
    }
    SampledField h = laplaceConvolve(powerKernel(f.grid(), axis, mu), applyEuler(f, axis, c0, c1, c2), axis,
                                     options);
    h.setExponent(axis, p - nu);
    if (vanishing && p - nu <= -1.0 + kExponentEps) h = absorbVanishingFactor(h, axis);
    h.ensureFinite("fracDerivative");
    return h;
}

SampledField glDerivative(const SampledField& f, double nu, std::size_t axis) {
    requireFractionalAxis(f, axis, "glDerivative");
    require(nu >= 0.0, ErrorCode::Precondition, "glDerivative: negative order");
    require(nu < kMaxDerivativeOrder, ErrorCode::Precondition, "glDerivative: order must be below 2");
    const Grid& grid = f.grid();
    const AxisSpec& ax = grid.axis(axis);
    require(ax.grading == 1.0, ErrorCode::Precondition, "glDerivative needs a uniform mesh");
    const double p = f.exponent(axis);
    require(p >= -kExponentEps, ErrorCode::Precondition,
            "glDerivative: f(0) is unbounded for a negative singularity exponent");

    const std::size_t n = ax.nodes;
    const double h = ax.length / static_cast<double>(n);
    std::vector<double> w(n + 1);
    w[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j) w[j] = w[j - 1] * (1.0 - (nu + 1.0) / static_cast<double>(j));

    const FractionalAxisInterpolator interp(ax);
    const Stencil atZero = interp.stencil(0.0, 1.0);
    const std::size_t stride = grid.stride(axis);
    const double scaleH = std::pow(h, -nu);

    SampledField out = f;
    out.setExponent(axis, 0.0);
    std::vector<Complex> line(n + 1);  // line[0] = f(0), line[i + 1] = f(t_i)
    std::vector<Complex> terms(n + 1);
    for (std::size_t base = 0; base < grid.size(); ++base) {
        if (grid.indexAlong(base, axis) != 0) continue;
        for (std::size_t c = 0; c < f.components(); ++c) {
            Complex f0{};
            if (std::abs(p) < kExponentEps) {
                for (std::size_t k = 0; k < kStencilWidth; ++k)
                    f0 += atZero.w[k] * f.regular(base + (atZero.start + k) * stride, c);
            }
            line[0] = f0;
            for (std::size_t i = 0; i < n; ++i)
                line[i + 1] = std::pow(ax.coordinate(i), p) * f.regular(base + i * stride, c);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j <= i + 1; ++j) terms[j] = w[j] * line[i + 1 - j];
                out.regularRef(base + i * stride, c) =
                    scaleH * pairwiseSum(std::span<const Complex>(terms.data(), i + 2));
            }
        }
    }
    out.ensureFinite("glDerivative");
    return out;
}

SampledField shiftedOp(const SampledField& f, double nu, std::size_t axis, ShiftKind kind,
                       const ConvolutionOptions& options) {
    const SampledField d = kind == ShiftKind::Integral ? fracIntegral(f, nu, axis, options)
                                                       : fracDerivative(f, nu, axis, options);
    return subtract(d, f);
}

SampledField timeDerivative(const SampledField& f, std::size_t axis) {
    requireFractionalAxis(f, axis, "timeDerivative");
    const double p = f.exponent(axis);
    SampledField out = applyEuler(f, axis, p, 1.0, 0.0);
    out.setExponent(axis, p - 1.0);
    if (std::abs(p) < kExponentEps) out = absorbVanishingFactor(out, axis);
    out.ensureFinite("timeDerivative");
    return out;
}

LemmaCheck lemmaProxy(const SampledField& f, double nu, std::size_t axis, double relTolerance) {
    requireFractionalAxis(f, axis, "lemmaProxy");
    LemmaCheck check;
    check.threshold = relTolerance * maxNorm(f);
    const double m = std::floor(nu);
    const double mu = m + 1.0 - nu;
    std::ostringstream detail;
    check.satisfied = true;
    SampledField fk = f;
    for (int k = 0; k <= static_cast<int>(m); ++k) {
        if (k > 0) fk = timeDerivative(fk, axis);
        if (fk.exponent(axis) <= -1.0) {
            check.satisfied = false;
            detail << "f^(" << k << ") has non-integrable exponent " << fk.exponent(axis) << "; ";
            continue;
        }
        SampledField h = fracIntegral(fk, mu, axis);
        const double q = h.exponent(axis);
        if (q > kExponentEps) continue;
        SampledField reg = h;
        reg.setExponent(axis, 0.0);
        double limit = 0.0;
        for (const Complex& v : sampleAlong(reg, axis, 0.0)) limit = std::max(limit, std::abs(v));
        check.limit = std::max(check.limit, limit);
        if (limit > check.threshold) {
            check.satisfied = false;
            detail << "f^(" << k << ")*Phi has exponent " << q << " and factor " << limit << " at t = 0; ";
        }
    }
    check.detail = check.satisfied ? "limits vanish" : detail.str();
    return check;
}

const char* toString(Identity identity) {
    switch (identity) {
        case Identity::CompositionInt: return "composition-int";
        case Identity::CompositionDer: return "composition-der";
        case Identity::LeibnizInt: return "leibniz-int";
        case Identity::Lemma: return "lemma";
        case Identity::LeibnizDer: return "leibniz-der";
        case Identity::LeibnizSplit: return "leibniz-split";
        case Identity::ShiftedLeibnizInt: return "shifted-leibniz-int";
        case Identity::ShiftedLeibnizDer: return "shifted-leibniz-der";
    }
    return "unknown";
}

namespace {

std::pair<SampledField, SampledField> identitySides(Identity identity, const SampledField& f,
                                                    const SampledField& g, std::size_t axis,
                                                    const IdentityParams& prm,
                                                    const ConvolutionOptions& opt) {
    const double nu = prm.nu;
    const double gamma = prm.gamma < 0.0 ? nu / 2.0 : prm.gamma;
    const bool check = prm.checkPreconditions;
    auto conv = [&](const SampledField& a, const SampledField& b) { return laplaceConvolve(a, b, axis, opt); };
    auto D = [&](const SampledField& a, double order) { return fracDerivative(a, order, axis, opt); };
    auto I = [&](const SampledField& a, double order) { return integralOrIdentity(a, order, axis, opt); };

    switch (identity) {
        case Identity::CompositionInt:
            require(nu > 0.0 && prm.mu > 0.0, ErrorCode::Precondition, "composition-int needs positive orders");
            return {I(I(f, prm.mu), nu), I(f, nu + prm.mu)};
        case Identity::CompositionDer:
            if (check)
                require(prm.mu < f.exponent(axis) + 1.0, ErrorCode::Precondition,
                        "composition-der needs mu < lambda + 1 for f ~ t^lambda");
            return {D(D(f, prm.mu), nu), D(f, nu + prm.mu)};
        case Identity::LeibnizInt:
            require(nu > 0.0 && gamma >= 0.0 && nu - gamma >= 0.0, ErrorCode::Precondition,
                    "leibniz-int needs nu > 0, 0 <= gamma <= nu");
            return {I(conv(f, g), nu), conv(I(f, nu - gamma), I(g, gamma))};
        case Identity::Lemma:
            if (check) requireLemma(f, nu, axis, "f");
            return {D(conv(f, g), nu), conv(D(f, nu), g)};
        case Identity::LeibnizDer: {
            require(prm.beta >= 0.0 && prm.beta <= 1.0, ErrorCode::Precondition, "beta must lie in [0, 1]");
            if (check) {
                requireLemma(f, nu, axis, "f");
                requireLemma(g, nu, axis, "g");
            }
            SampledField rhs = scale(conv(D(f, nu), g), prm.beta);
            if (prm.beta < 1.0) rhs = add(rhs, scale(conv(f, D(g, nu)), 1.0 - prm.beta));
            return {D(conv(f, g), nu), rhs};
        }
        case Identity::LeibnizSplit:
            require(gamma > 0.0 && nu - gamma > 0.0, ErrorCode::Precondition,
                    "leibniz-split needs gamma > 0 and nu - gamma > 0");
            if (check) {
                requireLemma(f, gamma, axis, "f");
                requireLemma(g, nu - gamma, axis, "g");
            }
            return {D(conv(f, g), nu), conv(D(f, gamma), D(g, nu - gamma))};
        case Identity::ShiftedLeibnizInt: {
            require(gamma > 0.0 && nu - gamma >= 0.0, ErrorCode::Precondition,
                    "shifted-leibniz-int needs gamma > 0 and nu - gamma >= 0");
            const auto k = ShiftKind::Integral;
            SampledField rhs = add(conv(I(f, gamma), shiftedOrZero(g, nu - gamma, axis, k, opt)),
                                   conv(shiftedOrZero(f, gamma, axis, k, opt), g));
            return {shiftedOp(conv(f, g), nu, axis, k, opt), rhs};
        }
        case Identity::ShiftedLeibnizDer: {
            require(gamma > 0.0 && nu - gamma > 0.0, ErrorCode::Precondition,
                    "shifted-leibniz-der needs gamma > 0 and nu - gamma > 0");
            if (check) {
                requireLemma(f, gamma, axis, "f");
                requireLemma(g, nu - gamma, axis, "g");
            }
            const auto k = ShiftKind::Derivative;
            SampledField rhs = add(conv(shiftedOrZero(f, gamma, axis, k, opt), g),
                                   conv(D(f, gamma), shiftedOrZero(g, nu - gamma, axis, k, opt)));
            return {shiftedOp(conv(f, g), nu, axis, k, opt), rhs};
        }
    }
    throw Error(ErrorCode::Precondition, "unknown identity");
}

}  // namespace

SampledField identityResidualField(Identity identity, const SampledField& f, const SampledField& g,
                                   std::size_t axis, const IdentityParams& params,
                                   const ConvolutionOptions& options) {
    auto [lhs, rhs] = identitySides(identity, f, g, axis, params, options);
    return subtract(lhs, rhs);
}

ResidualReport identityResidual(Identity identity, const FieldFactory& f, const FieldFactory& g,
                                const IdentityParams& params, const std::vector<std::size_t>& resolutions,
                                const PointMask& mask, const ConvolutionOptions& options) {
    ResidualReport report;
    double scaleMax = 0.0;
    for (std::size_t n : resolutions) {
        const SampledField fn = f(n);
        const SampledField gn = g ? g(n) : fn;
        auto [lhs, rhs] = identitySides(identity, fn, gn, 0, params, options);
        const SampledField r = subtract(lhs, rhs);
        report.resolutions.push_back(n);
        report.maxNorm.push_back(maxNorm(r, mask));
        report.l2Norm.push_back(l2Norm(r, mask));
        scaleMax = std::max(scaleMax, maxNorm(lhs, mask));
    }
    finalizeReport(report, 1e-11 * scaleMax);
    return report;
}

}  // namespace fracflux
