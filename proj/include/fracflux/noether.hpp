#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fracflux/convolution.hpp"
#include "fracflux/field.hpp"
#include "fracflux/fracops.hpp"
#include "fracflux/residual.hpp"

namespace fracflux {

/// Constant coefficient: a scalar (acting as a multiple of the identity) or a
/// size x size matrix stored row-major.
struct Coefficient {
    std::size_t size = 1;
    std::vector<double> entries{1.0};

    static Coefficient scalar(double value);
    static Coefficient matrix(std::size_t n, std::vector<double> rowMajor);

    bool isScalar() const { return size == 1; }
    bool isZero() const;
    /// Entry (a, b) of the coefficient acting on c-component fields.
    double at(std::size_t a, std::size_t b) const;

    Coefficient operator*(double factor) const;
    bool operator==(const Coefficient&) const = default;
};

/// One derivative factor: d/dx_axis on a classical axis or D^order on a
/// fractional axis.
struct Atom {
    bool fractional = false;
    std::size_t axis = 0;
    double order = 1.0;

    static Atom classical(std::size_t axis) { return {false, axis, 1.0}; }
    static Atom frac(std::size_t axis, double order) { return {true, axis, order}; }

    auto operator<=>(const Atom&) const = default;
};

/// Product of atoms, leftmost applied last.
using Word = std::vector<Atom>;

std::string toString(const Word& word);

struct FractionalTerm {
    Word word;
    Coefficient coeff;
    bool operator==(const FractionalTerm&) const = default;
};

struct ClassicalTerm {
    std::vector<std::size_t> mu;
    Coefficient coeff;
    bool operator==(const ClassicalTerm&) const = default;
};

/// Lambda(D, d) = sum Lt_w D^{w} + sum L_mu d^mu + L_0 on a tensor-product grid.
struct OperatorSpec {
    std::vector<AxisSpec> axes;
    std::vector<FractionalTerm> fractionalTerms;
    std::vector<ClassicalTerm> classicalTerms;
    Coefficient constantTerm = Coefficient::scalar(0.0);

    /// Number of field components (the coefficient size).
    std::size_t components() const;
    Grid grid() const { return Grid(axes); }

    /// Throws Error(Precondition / AxisRole) for bad axes, orders, sizes or
    /// coefficients that are not symmetric under permutation of a word.
    void validate() const;
    /// Throws unless `grid` has the spec's rank, axis roles and topologies.
    void requireCompatible(const Grid& grid) const;

    bool operator==(const OperatorSpec&) const = default;

    /// D^alpha_t - C sum_i d_i^2 on axes (t, x_1, ..., x_d).
    static OperatorSpec diffusion(double alpha, double diffusivity, std::vector<AxisSpec> axes);
};

/// JSON document with keys "axes", "fractional_terms", "classical_terms",
/// "constant_term" (see README). Round trips exactly.
OperatorSpec parseOperatorSpec(const std::string& text);
std::string serializeOperatorSpec(const OperatorSpec& spec);
OperatorSpec loadOperatorSpec(const std::string& path);

/// phi' * (sum coeff (left phi') (right phi)) with the signs of left-acting
/// derivatives folded into coeff; * is the Laplace convolution over every
/// fractional axis (pointwise product when there is none).
struct BilinearTerm {
    Word left;
    Word right;
    Coefficient coeff;
    bool operator==(const BilinearTerm&) const = default;
};

struct BilinearForm {
    std::vector<BilinearTerm> terms;
    bool operator==(const BilinearForm&) const = default;
};

/// Current component and the divergence atom that acts on it.
struct GammaComponent {
    Atom divergence;
    BilinearForm form;
    bool operator==(const GammaComponent&) const = default;
};

struct GammaSet {
    /// One per distinct (fractional axis, order).
    std::vector<GammaComponent> gammaTilde;
    /// One per classical axis that appears in a classical term.
    std::vector<GammaComponent> gamma;
};

/// Takahashi-Umezawa splitting of every word W = A_1 ... A_l: position i
/// contributes (-1)^{i-1} coeff (A_{i-1} ... A_1 phi') (A_{i+1} ... A_l phi) to
/// the component of A_i, doubled for fractional atoms. Words are symmetrized
/// over their distinct orderings first.
GammaSet buildGamma(const OperatorSpec& spec);

SampledField applyWord(const Word& word, const SampledField& f, const ConvolutionOptions& options = {});
/// Coefficient acting on the component index of f from the left (column
/// vector) or from the right (row vector).
SampledField applyCoefficient(const Coefficient& c, const SampledField& f, bool rowVector = false);

/// Lambda(D, d) f.
SampledField applyOperator(const OperatorSpec& spec, const SampledField& f, const ConvolutionOptions& options = {});
/// f Lambda(-<-D, -<-d), f a row vector.
SampledField applyConjugateOperator(const OperatorSpec& spec, const SampledField& f,
                                    const ConvolutionOptions& options = {});

/// Convolution product over all fractional axes, contracted over components.
SampledField starProduct(const SampledField& f, const SampledField& g, const ConvolutionOptions& options = {});

SampledField evaluate(const BilinearForm& form, const SampledField& phiPrime, const SampledField& phi,
                      const ConvolutionOptions& options = {});

/// Applies one divergence atom: d/dx (classical) or D^order (fractional).
SampledField applyDivergence(const Atom& atom, const SampledField& j, const ConvolutionOptions& options = {});

enum class TelescopePart { All, Classical, Fractional };

/// sum_A A(f * Gamma_A g) - [f * Lambda(D,d) g - (f Lambda(-<-D,-<-d)) * g]
/// restricted to the chosen part of the operator. Throws Error(Precondition)
/// when a convolution factor fails the Lemma proxy for its divergence order.
SampledField telescopeResidualField(const OperatorSpec& spec, const SampledField& f, const SampledField& g,
                                    TelescopePart part = TelescopePart::All,
                                    const ConvolutionOptions& options = {});

ResidualReport telescopeResidual(const OperatorSpec& spec, const FieldFactory& f, const FieldFactory& g,
                                 const std::vector<std::size_t>& resolutions, TelescopePart part = TelescopePart::All,
                                 const PointMask& mask = {}, const ConvolutionOptions& options = {});

/// Symmetry generator: P_i = d_i, M_ij = x_i d_j - x_j d_i, or the fractional
/// momentum D^order along a fractional axis.
struct Symmetry {
    enum class Kind { Momentum, Rotation, FractionalMomentum };
    Kind kind = Kind::Momentum;
    std::size_t i = 0;
    std::size_t j = 0;
    double order = 0.5;

    static Symmetry momentum(std::size_t axis) { return {Kind::Momentum, axis, 0, 0.0}; }
    static Symmetry rotation(std::size_t i, std::size_t j) { return {Kind::Rotation, i, j, 0.0}; }
    static Symmetry fractionalMomentum(std::size_t axis, double order) {
        return {Kind::FractionalMomentum, axis, 0, order};
    }
};

SampledField applySymmetry(const Symmetry& delta, const SampledField& f, const ConvolutionOptions& options = {});

struct CurrentComponent {
    Atom divergence;
    SampledField field;
};

struct Current {
    std::vector<CurrentComponent> components;

    /// Sum of the components whose divergence acts on `axis`.
    SampledField along(std::size_t axis) const;
};

/// J_A = phi' * Gamma_A phi. With a symmetry, delta phi replaces phi and both
/// fields are re-checked with the Lemma proxy on every fractional order.
Current assembleCurrent(const OperatorSpec& spec, const SampledField& phiPrime, const SampledField& phi,
                        const std::optional<Symmetry>& symmetry = std::nullopt,
                        const ConvolutionOptions& options = {});

struct StationarityResult {
    /// sum_A A J_A.
    SampledField lawResidual;
    /// (phi'_0 Lt) (Phi_{1-alpha} * phi) + (Phi_{1-alpha} * phi') (Lt phi_0):
    /// the right-hand side when phi and phi' solve the problems with initial
    /// terms Lt phi_0 Phi_{1-alpha} and phi'_0 Lt Phi_{1-alpha}.
    std::optional<SampledField> sourceField;
};

/// Initial profiles are t-independent fields on the same grid. The source
/// needs one fractional axis whose terms are single atoms of one order in
/// (0, 1); it is omitted when no initial data are given.
StationarityResult stationarityResidual(const Current& current, const OperatorSpec& spec,
                                        const SampledField& phiPrime, const SampledField& phi,
                                        const std::optional<SampledField>& phi0 = std::nullopt,
                                        const std::optional<SampledField>& phiPrime0 = std::nullopt,
                                        const ConvolutionOptions& options = {});

/// J'_A = (d/dx_k)^m (Phi_{m+1-alpha} *_k J_A) on fractional components
/// (m = floor(alpha), alpha not an integer); classical components unchanged.
Current toConservedCurrent(const Current& current, const ConvolutionOptions& options = {});

/// sum_A d/dx_{axis(A)} J'_A.
SampledField conservationResidual(const Current& conserved);

enum class ChargeKind { Stationary, Conserved };

struct ChargeSeries {
    /// Q on the time axis alone, singularity exponent included.
    SampledField q;
    ChargeKind kind = ChargeKind::Stationary;
    std::size_t timeAxis = 0;
};

/// Integral of f over the classical axes: exact trapezoid on periodic axes,
/// midpoint rule on truncated lines after checking that |f| on the outermost
/// nodes is below tailTolerance * max|f|. Returns a field on the fractional
/// axes alone.
SampledField spatialIntegral(const SampledField& f, double tailTolerance = 1e-10);

/// Q(t) = integral of the time component over space. The grid must have
/// exactly one fractional axis.
ChargeSeries charge(const Current& current, ChargeKind kind = ChargeKind::Stationary,
                    double tailTolerance = 1e-10);

/// Boundary flux sum_j [J_j]_{x_j = -L/2}^{L/2} integrated over the remaining
/// space axes (zero on periodic axes), as a field on the time axis.
SampledField boundaryFlux(const Current& current);

struct ChargeIdentityReport {
    /// max_t |D^alpha Q - (initialTerms - flux)|.
    double stationarity = 0.0;
    /// max_t |dQ'/dt - D^alpha Q|.
    double conservation = 0.0;
    /// max_t |D^alpha Q| for scale.
    double scale = 0.0;
    SampledField fracDerivativeQ;
};

/// Checks D^alpha Q = initialTerms - flux and dQ'/dt = D^alpha Q on the time
/// nodes selected by `mask` (all by default).
ChargeIdentityReport chargeIdentityCheck(const ChargeSeries& q, const ChargeSeries& qPrime, double alpha,
                                         const SampledField& flux, const SampledField& initialTerms,
                                         const PointMask& mask = {}, const ConvolutionOptions& options = {});

}  // namespace fracflux
