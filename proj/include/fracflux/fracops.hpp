#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fracflux/convolution.hpp"
#include "fracflux/field.hpp"
#include "fracflux/residual.hpp"

namespace fracflux {

/// Largest derivative order accepted by fracDerivative (exclusive).
inline constexpr double kMaxDerivativeOrder = 2.0;

/// Riemann-Liouville integral D^{-nu} f = Phi_nu * f along a fractional axis.
SampledField fracIntegral(const SampledField& f, double nu, std::size_t axis,
                          const ConvolutionOptions& options = {});

/// Riemann-Liouville derivative D^nu f = (d/dt)^{m+1} D^{-(m+1-nu)} f,
/// m = floor(nu), 0 <= nu < 2.
///
/// With f = t^p F and q = p + m + 1 - nu the outer derivatives are moved inside
/// the integral as Euler operators: D^nu f = t^{p-nu} int_0^1 Phi_{m+1-nu}(1-u)
/// u^p [prod_{i=0..m} (q - i + theta) F](t u) du. Requires p > -1; the result
/// carries exponent p - nu.
SampledField fracDerivative(const SampledField& f, double nu, std::size_t axis,
                            const ConvolutionOptions& options = {});

/// Grunwald-Letnikov derivative on a uniform fractional axis, first order in h.
/// f(0) is taken from the singularity exponent (zero for p > 0, extrapolated
/// for p = 0); p < 0 is rejected.
SampledField glDerivative(const SampledField& f, double nu, std::size_t axis);

enum class ShiftKind { Integral, Derivative };

/// D^{-nu} f - f (Integral) or D^{nu} f - f (Derivative).
SampledField shiftedOp(const SampledField& f, double nu, std::size_t axis, ShiftKind kind,
                       const ConvolutionOptions& options = {});

/// Ordinary d/dt along a fractional axis: d/dt (t^p F) = t^{p-1} (p + theta) F.
SampledField timeDerivative(const SampledField& f, std::size_t axis);

/// Outcome of the numerical check of lim_{t -> 0+} f^{(k)} * Phi_{m+1-nu} = 0,
/// k = 0..m, that licenses moving D^nu onto one factor of a convolution.
struct LemmaCheck {
    bool satisfied = false;
    /// Largest extrapolated |limit| over k and the other axes.
    double limit = 0.0;
    double threshold = 0.0;
    std::string detail;
};

/// Decides each limit from the exponent q of h_k = f^{(k)} * Phi_{m+1-nu}:
/// q > 0 gives zero, q = 0 compares the regular factor extrapolated to t = 0
/// with `relTolerance * max|f|`, q < 0 fails unless that factor vanishes.
LemmaCheck lemmaProxy(const SampledField& f, double nu, std::size_t axis, double relTolerance = 1e-6);

enum class Identity {
    CompositionInt,     // D^{-nu} D^{-mu} f = D^{-(nu+mu)} f
    CompositionDer,     // D^{nu} D^{mu} f = D^{nu+mu} f (only under its conditions)
    LeibnizInt,         // D^{-nu}(f*g) = D^{-(nu-gamma)} f * D^{-gamma} g
    Lemma,              // D^{nu}(f*g) = (D^{nu} f) * g
    LeibnizDer,         // D^{nu}(f*g) = beta (D^nu f)*g + (1-beta) f*(D^nu g)
    LeibnizSplit,       // D^{nu}(f*g) = (D^gamma f) * (D^{nu-gamma} g)
    ShiftedLeibnizInt,  // Dsh^{-nu}(f*g) = (D^{-gamma} f)*Dsh^{-(nu-gamma)} g + (Dsh^{-gamma} f)*g
    ShiftedLeibnizDer,  // Dsh^{nu}(f*g) = (Dsh^gamma f)*g + (D^gamma f)*Dsh^{nu-gamma} g
};

const char* toString(Identity identity);

struct IdentityParams {
    double nu = 0.5;
    /// Second order of the composition identities.
    double mu = 0.5;
    /// Leibniz split; negative means nu / 2.
    double gamma = -1.0;
    double beta = 0.5;
    /// Skip the Lemma-condition checks (used to exhibit failing identities).
    bool checkPreconditions = true;
};

/// LHS - RHS of the identity on one grid. `g` is ignored by the composition
/// identities. Throws Error(Precondition) when the parameters or the Lemma
/// proxy rule the identity out.
SampledField identityResidualField(Identity identity, const SampledField& f, const SampledField& g,
                                   std::size_t axis, const IdentityParams& params,
                                   const ConvolutionOptions& options = {});

/// Builds an operand on the one-axis grid with `n` nodes.
using FieldFactory = std::function<SampledField(std::size_t n)>;

/// Residual norms of the identity over the listed resolutions (restricted to
/// `mask` when given) with the observed order.
ResidualReport identityResidual(Identity identity, const FieldFactory& f, const FieldFactory& g,
                                const IdentityParams& params, const std::vector<std::size_t>& resolutions,
                                const PointMask& mask = {}, const ConvolutionOptions& options = {});

}  // namespace fracflux
