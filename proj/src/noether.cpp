#include "fracflux/noether.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fracflux/classical.hpp"
#include "fracflux/error.hpp"

namespace fracflux {

namespace {

SampledField sumComponents(const SampledField& f) {
    const std::vector<Complex> ones(f.components(), Complex(1.0));
    return contract(f, ones);
}

SampledField zeroLike(const Grid& grid) { return SampledField(grid, 1); }

SampledField accumulate(std::optional<SampledField>& acc, const SampledField& term) {
    acc = acc ? add(*acc, term) : term;
    return *acc;
}

void requireLemma(const SampledField& f, const Atom& atom, const char* what) {
    const LemmaCheck c = lemmaProxy(f, atom.order, atom.axis);
    require(c.satisfied, ErrorCode::Precondition,
            std::string(what) + " fails the Lemma proxy for D^" + std::to_string(atom.order) + ": " + c.detail);
}

// Word applications of one field, shared between terms.
class WordCache {
  public:
    WordCache(const SampledField& f, const ConvolutionOptions& options) : f_(f), options_(options) {}
    const SampledField& operator()(const Word& w) {
        auto it = cache_.find(w);
        if (it == cache_.end()) it = cache_.emplace(w, applyWord(w, f_, options_)).first;
        return it->second;
    }

  private:
    const SampledField& f_;
    const ConvolutionOptions& options_;
    std::map<Word, SampledField> cache_;
};

Word reversed(Word w) {
    std::reverse(w.begin(), w.end());
    return w;
}

struct SpecTerm {
    Word word;
    Coefficient coeff;
    bool fractional;
};

std::vector<SpecTerm> specTerms(const OperatorSpec& spec) {
    std::vector<SpecTerm> out;
    for (const auto& t : spec.fractionalTerms) out.push_back({t.word, t.coeff, true});
    for (const auto& t : spec.classicalTerms) {
        Word w;
        for (std::size_t a : t.mu) w.push_back(Atom::classical(a));
        out.push_back({w, t.coeff, false});
    }
    return out;
}

std::vector<std::size_t> fractionalAxesOf(const Grid& grid) { return grid.fractionalAxes(); }

Grid fractionalGrid(const Grid& grid) {
    std::vector<AxisSpec> axes;
    for (std::size_t a : grid.fractionalAxes()) axes.push_back(grid.axis(a));
    require(!axes.empty(), ErrorCode::AxisRole, "grid has no fractional axis");
    return Grid(axes);
}

}  // namespace

SampledField applyWord(const Word& word, const SampledField& f, const ConvolutionOptions& options) {
    SampledField out = f;
    std::size_t k = word.size();
    while (k > 0) {
        const Atom& atom = word[k - 1];
        if (atom.fractional) {
            out = fracDerivative(out, atom.order, atom.axis, options);
            --k;
            continue;
        }
        // Repeated classical atoms on one axis become one higher derivative.
        int order = 1;
        while (k - order > 0 && order < kMaxClassicalOrder && word[k - order - 1] == atom) ++order;
        out = classicalDerivative(out, atom.axis, order);
        k -= static_cast<std::size_t>(order);
    }
    return out;
}

SampledField applyCoefficient(const Coefficient& c, const SampledField& f, bool rowVector) {
    if (c.isScalar()) return scale(f, c.entries[0]);
    require(f.components() == c.size, ErrorCode::ComponentMismatch,
            "matrix coefficient size differs from the field's component count");
    std::vector<SampledField> parts;
    for (std::size_t out = 0; out < c.size; ++out) {
        std::vector<Complex> row(c.size);
        for (std::size_t in = 0; in < c.size; ++in) row[in] = rowVector ? c.at(in, out) : c.at(out, in);
        parts.push_back(contract(f, row));
    }
    return SampledField::stack(parts);
}

SampledField applyOperator(const OperatorSpec& spec, const SampledField& f, const ConvolutionOptions& options) {
    spec.requireCompatible(f.grid());
    WordCache words(f, options);
    std::optional<SampledField> acc;
    for (const auto& t : specTerms(spec)) accumulate(acc, applyCoefficient(t.coeff, words(t.word)));
    if (!spec.constantTerm.isZero()) accumulate(acc, applyCoefficient(spec.constantTerm, f));
    return acc ? *acc : scale(f, 0.0);
}

SampledField applyConjugateOperator(const OperatorSpec& spec, const SampledField& f,
                                    const ConvolutionOptions& options) {
    spec.requireCompatible(f.grid());
    WordCache words(f, options);
    std::optional<SampledField> acc;
    for (const auto& t : specTerms(spec)) {
        const double sign = t.word.size() % 2 == 0 ? 1.0 : -1.0;
        accumulate(acc, applyCoefficient(t.coeff * sign, words(reversed(t.word)), true));
    }
    if (!spec.constantTerm.isZero()) accumulate(acc, applyCoefficient(spec.constantTerm, f, true));
    return acc ? *acc : scale(f, 0.0);
}

SampledField starProduct(const SampledField& f, const SampledField& g, const ConvolutionOptions& options) {
    requireSameGrid(f, g, "starProduct");
    require(f.components() == g.components(), ErrorCode::ComponentMismatch,
            "starProduct: component counts differ");
    const auto axes = fractionalAxesOf(f.grid());
    if (axes.empty()) return sumComponents(multiplyBy(f, g));
    return sumComponents(laplaceConvolve(f, g, axes, options));
}

SampledField evaluate(const BilinearForm& form, const SampledField& phiPrime, const SampledField& phi,
                      const ConvolutionOptions& options) {
    requireSameGrid(phiPrime, phi, "evaluate");
    WordCache left(phiPrime, options);
    WordCache right(phi, options);
    std::optional<SampledField> acc;
    for (const auto& t : form.terms)
        accumulate(acc, starProduct(left(t.left), applyCoefficient(t.coeff, right(t.right)), options));
    return acc ? *acc : zeroLike(phi.grid());
}

SampledField applyDivergence(const Atom& atom, const SampledField& j, const ConvolutionOptions& options) {
    if (atom.fractional) return fracDerivative(j, atom.order, atom.axis, options);
    return classicalDerivative(j, atom.axis, 1);
}

SampledField telescopeResidualField(const OperatorSpec& spec, const SampledField& f, const SampledField& g,
                                    TelescopePart part, const ConvolutionOptions& options) {
    spec.requireCompatible(f.grid());
    requireSameGrid(f, g, "telescopeResidual");
    const GammaSet gamma = buildGamma(spec);
    const bool useFrac = part != TelescopePart::Classical;
    const bool useClassical = part != TelescopePart::Fractional;

    WordCache left(f, options);
    WordCache right(g, options);
    std::optional<SampledField> acc;
    auto addComponents = [&](const std::vector<GammaComponent>& comps) {
        for (const auto& c : comps) {
            if (c.divergence.fractional) {
                for (const auto& t : c.form.terms) {
                    requireLemma(left(t.left), c.divergence, "left factor");
                    requireLemma(right(t.right), c.divergence, "right factor");
                }
            }
            std::optional<SampledField> j;
            for (const auto& t : c.form.terms)
                accumulate(j, starProduct(left(t.left), applyCoefficient(t.coeff, right(t.right)), options));
            if (j) accumulate(acc, applyDivergence(c.divergence, *j, options));
        }
    };
    if (useFrac) addComponents(gamma.gammaTilde);
    if (useClassical) addComponents(gamma.gamma);

    for (const auto& t : specTerms(spec)) {
        if ((t.fractional && !useFrac) || (!t.fractional && !useClassical)) continue;
        const double sign = t.word.size() % 2 == 0 ? 1.0 : -1.0;
        const SampledField direct = starProduct(f, applyCoefficient(t.coeff, right(t.word)), options);
        const SampledField conj = starProduct(applyCoefficient(t.coeff * sign, left(reversed(t.word)), true), g, options);
        accumulate(acc, subtract(conj, direct));
    }
    return acc ? *acc : zeroLike(f.grid());
}

ResidualReport telescopeResidual(const OperatorSpec& spec, const FieldFactory& f, const FieldFactory& g,
                                 const std::vector<std::size_t>& resolutions, TelescopePart part,
                                 const PointMask& mask, const ConvolutionOptions& options) {
    ResidualReport report;
    double scaleMax = 0.0;
    for (std::size_t n : resolutions) {
        const SampledField fn = f(n);
        const SampledField gn = g ? g(n) : fn;
        const SampledField r = telescopeResidualField(spec, fn, gn, part, options);
        report.resolutions.push_back(n);
        report.maxNorm.push_back(maxNorm(r, mask));
        report.l2Norm.push_back(l2Norm(r, mask));
        scaleMax = std::max(scaleMax, maxNorm(starProduct(fn, applyOperator(spec, gn, options), options), mask));
    }
    finalizeReport(report, 1e-11 * scaleMax);
    return report;
}

SampledField applySymmetry(const Symmetry& delta, const SampledField& f, const ConvolutionOptions& options) {
    const Grid& grid = f.grid();
    auto requireClassical = [&](std::size_t a) {
        require(a < grid.rank() && !grid.axis(a).isFractional(), ErrorCode::AxisRole,
                "symmetry generator needs a classical axis");
    };
    switch (delta.kind) {
        case Symmetry::Kind::Momentum:
            requireClassical(delta.i);
            return classicalDerivative(f, delta.i, 1);
        case Symmetry::Kind::Rotation: {
            requireClassical(delta.i);
            requireClassical(delta.j);
            require(delta.i != delta.j, ErrorCode::Precondition, "rotation needs two distinct axes");
            const std::size_t i = delta.i;
            const std::size_t j = delta.j;
            const SampledField a = pointwiseMul(classicalDerivative(f, j, 1), [i](std::span<const double> x) { return Complex(x[i]); });
            const SampledField b = pointwiseMul(classicalDerivative(f, i, 1), [j](std::span<const double> x) { return Complex(x[j]); });
            return subtract(a, b);
        }
        case Symmetry::Kind::FractionalMomentum: {
            require(delta.i < grid.rank() && grid.axis(delta.i).isFractional(), ErrorCode::AxisRole,
                    "fractional momentum needs a fractional axis");
            requireLemma(f, Atom::frac(delta.i, delta.order), "field");
            return fracDerivative(f, delta.order, delta.i, options);
        }
    }
    return f;
}

SampledField Current::along(std::size_t axis) const {
    std::optional<SampledField> acc;
    for (const auto& c : components)
        if (c.divergence.axis == axis) accumulate(acc, c.field);
    require(acc.has_value(), ErrorCode::AxisRole, "current has no component along this axis");
    return *acc;
}

Current assembleCurrent(const OperatorSpec& spec, const SampledField& phiPrime, const SampledField& phiIn,
                        const std::optional<Symmetry>& symmetry, const ConvolutionOptions& options) {
    spec.requireCompatible(phiIn.grid());
    requireSameGrid(phiPrime, phiIn, "assembleCurrent");
    const SampledField phi = symmetry ? applySymmetry(*symmetry, phiIn, options) : phiIn;
    const GammaSet gamma = buildGamma(spec);
    if (symmetry) {
        for (const auto& c : gamma.gammaTilde) {
            requireLemma(phiPrime, c.divergence, "phi'");
            requireLemma(phi, c.divergence, "transformed phi");
        }
    }
    Current current;
    for (const auto* set : {&gamma.gammaTilde, &gamma.gamma})
        for (const auto& c : *set) current.components.push_back({c.divergence, evaluate(c.form, phiPrime, phi, options)});
    return current;
}

StationarityResult stationarityResidual(const Current& current, const OperatorSpec& spec,
                                        const SampledField& phiPrime, const SampledField& phi,
                                        const std::optional<SampledField>& phi0,
                                        const std::optional<SampledField>& phiPrime0,
                                        const ConvolutionOptions& options) {
    require(!current.components.empty(), ErrorCode::Precondition, "empty current");
    std::optional<SampledField> law;
    for (const auto& c : current.components) accumulate(law, applyDivergence(c.divergence, c.field, options));
    StationarityResult result{*law, std::nullopt};
    require(phi0.has_value() == phiPrime0.has_value(), ErrorCode::Precondition,
            "the source needs both initial profiles");
    if (!phi0) return result;

    const Grid& grid = phi.grid();
    const auto frac = grid.fractionalAxes();
    require(frac.size() == 1, ErrorCode::AxisRole, "the initial-term source needs exactly one fractional axis");
    // Single atom D^alpha on the time axis; its coefficients are summed.
    double alpha = 0.0;
    std::size_t n = 1;
    for (const auto& term : spec.fractionalTerms) {
        require(term.word.size() == 1, ErrorCode::Precondition,
                "the initial-term source needs single-atom fractional terms");
        require(alpha == 0.0 || term.word[0].order == alpha, ErrorCode::Precondition,
                "the initial-term source needs one fractional order");
        alpha = term.word[0].order;
        n = std::max(n, term.coeff.size);
    }
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::Precondition, "the initial-term source needs an order in (0, 1)");
    std::vector<double> entries(n * n, 0.0);
    for (const auto& term : spec.fractionalTerms)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) entries[a * n + b] += term.coeff.at(a, b);
    const Coefficient total = n == 1 ? Coefficient::scalar(entries[0]) : Coefficient::matrix(n, entries);
    const std::size_t t = frac[0];
    const SampledField kernel = powerKernel(grid, t, 1.0 - alpha);
    const SampledField kPhi = laplaceConvolve(kernel, phi, t, options);
    const SampledField kPhiPrime = laplaceConvolve(kernel, phiPrime, t, options);
    const SampledField a = sumComponents(multiplyBy(kPhi, applyCoefficient(total, *phiPrime0, true)));
    const SampledField b = sumComponents(multiplyBy(kPhiPrime, applyCoefficient(total, *phi0)));
    result.sourceField = add(a, b);
    return result;
}

Current toConservedCurrent(const Current& current, const ConvolutionOptions& options) {
    Current out;
    for (const auto& c : current.components) {
        if (!c.divergence.fractional) {
            out.components.push_back(c);
            continue;
        }
        const double alpha = c.divergence.order;
        const double m = std::floor(alpha);
        require(alpha != m, ErrorCode::Precondition, "integer orders have no conserved form; treat the axis as classical");
        SampledField j = fracIntegral(c.field, m + 1.0 - alpha, c.divergence.axis, options);
        for (int k = 0; k < static_cast<int>(m); ++k) j = timeDerivative(j, c.divergence.axis);
        out.components.push_back({Atom::frac(c.divergence.axis, 1.0), std::move(j)});
    }
    return out;
}

SampledField conservationResidual(const Current& conserved) {
    std::optional<SampledField> acc;
    for (const auto& c : conserved.components) {
        const std::size_t a = c.divergence.axis;
        accumulate(acc, c.field.grid().axis(a).isFractional() ? timeDerivative(c.field, a)
                                                             : classicalDerivative(c.field, a, 1));
    }
    require(acc.has_value(), ErrorCode::Precondition, "empty current");
    return *acc;
}

SampledField spatialIntegral(const SampledField& f, double tailTolerance) {
    require(f.components() == 1, ErrorCode::ComponentMismatch, "spatialIntegral needs a scalar field");
    const Grid& grid = f.grid();
    const Grid out = fractionalGrid(grid);
    const auto frac = grid.fractionalAxes();
    const auto cls = grid.classicalAxes();

    double weight = 1.0;
    double peak = 0.0;
    double tail = 0.0;
    for (std::size_t a : cls) weight *= grid.axis(a).spacing();
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double v = std::abs(f.regular(p));
        peak = std::max(peak, v);
        for (std::size_t a : cls) {
            if (grid.axis(a).topology != Topology::TruncatedLine) continue;
            const std::size_t i = grid.indexAlong(p, a);
            if (i == 0 || i + 1 == grid.extent(a)) tail = std::max(tail, v);
        }
    }
    require(tail <= tailTolerance * peak, ErrorCode::Domain,
            "integrand has not decayed at the truncated boundary (relative tail " + std::to_string(tail / peak) + ")");

    std::vector<std::vector<Complex>> terms(out.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        std::size_t q = 0;
        for (std::size_t k = 0; k < frac.size(); ++k) q += grid.indexAlong(p, frac[k]) * out.stride(k);
        terms[q].push_back(weight * f.regular(p));
    }
    SampledField result(out, 1);
    for (std::size_t k = 0; k < frac.size(); ++k) result.setExponent(k, f.exponent(frac[k]));
    for (std::size_t q = 0; q < out.size(); ++q) result.regularRef(q) = pairwiseSum(std::span<const Complex>(terms[q]));
    return result;
}

ChargeSeries charge(const Current& current, ChargeKind kind, double tailTolerance) {
    require(!current.components.empty(), ErrorCode::Precondition, "empty current");
    const Grid& grid = current.components.front().field.grid();
    const auto frac = grid.fractionalAxes();
    require(frac.size() == 1, ErrorCode::AxisRole, "charges need exactly one fractional (time) axis");
    return {spatialIntegral(current.along(frac[0]), tailTolerance), kind, frac[0]};
}

SampledField boundaryFlux(const Current& current) {
    require(!current.components.empty(), ErrorCode::Precondition, "empty current");
    const Grid& grid = current.components.front().field.grid();
    std::optional<SampledField> acc;
    for (const auto& c : current.components) {
        const std::size_t a = c.divergence.axis;
        if (c.divergence.fractional || grid.axis(a).topology != Topology::TruncatedLine) continue;
        require(c.field.components() == 1, ErrorCode::ComponentMismatch, "boundaryFlux needs scalar components");
        // Jump across the axis, placed on the first node and divided by the
        // spacing so the spatial integral removes the integration along a.
        SampledField jump(grid, 1);
        for (std::size_t b = 0; b < grid.rank(); ++b)
            if (grid.axis(b).isFractional()) jump.setExponent(b, c.field.exponent(b));
        const std::size_t last = (grid.extent(a) - 1) * grid.stride(a);
        for (std::size_t p = 0; p < grid.size(); ++p)
            if (grid.indexAlong(p, a) == 0)
                jump.regularRef(p) = (c.field.regular(p + last) - c.field.regular(p)) / grid.axis(a).spacing();
        accumulate(acc, spatialIntegral(jump, std::numeric_limits<double>::infinity()));
    }
    return acc ? *acc : SampledField(fractionalGrid(grid), 1);
}

ChargeIdentityReport chargeIdentityCheck(const ChargeSeries& q, const ChargeSeries& qPrime, double alpha,
                                         const SampledField& flux, const SampledField& initialTerms,
                                         const PointMask& mask, const ConvolutionOptions& options) {
    require(q.q.grid().rank() == 1 && qPrime.q.grid() == q.q.grid(), ErrorCode::GridMismatch,
            "charge series must share one time grid");
    requireSameGrid(q.q, flux, "chargeIdentityCheck");
    requireSameGrid(q.q, initialTerms, "chargeIdentityCheck");
    ChargeIdentityReport r;
    r.fracDerivativeQ = fracDerivative(q.q, alpha, 0, options);
    const SampledField rhs = subtract(initialTerms, flux);
    r.stationarity = maxDifference(r.fracDerivativeQ, rhs, mask);
    r.conservation = maxDifference(timeDerivative(qPrime.q, 0), r.fracDerivativeQ, mask);
    r.scale = maxNorm(r.fracDerivativeQ, mask);
    return r;
}

}  // namespace fracflux
