#include "fracflux/field.hpp"

#include <algorithm>
#include <cmath>

#include "fracflux/error.hpp"

namespace fracflux {

namespace {

template <typename T>
T pairwiseSumImpl(std::span<const T> terms) {
    if (terms.empty()) return T{};
    if (terms.size() <= 8) {
        T s{};
        for (const auto& v : terms) s += v;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwiseSumImpl(terms.subspan(0, half)) + pairwiseSumImpl(terms.subspan(half));
}

std::vector<double> normalizeExponents(const Grid& grid, std::vector<double> exponents) {
    if (exponents.empty()) exponents.assign(grid.rank(), 0.0);
    require(exponents.size() == grid.rank(), ErrorCode::ShapeMismatch,
            "one singularity exponent per axis expected");
    for (std::size_t a = 0; a < grid.rank(); ++a) {
        if (!grid.axis(a).isFractional()) {
            require(exponents[a] == 0.0, ErrorCode::AxisRole,
                    "singularity exponents are only defined on fractional axes");
        }
    }
    return exponents;
}

}  // namespace

Complex pairwiseSum(std::span<const Complex> terms) { return pairwiseSumImpl(terms); }
double pairwiseSum(std::span<const double> terms) { return pairwiseSumImpl(terms); }

SampledField::SampledField(Grid grid, std::size_t components)
    : grid_(std::move(grid)), components_(components) {
    require(components_ >= 1, ErrorCode::ShapeMismatch, "field needs at least one component");
    values_.assign(grid_.size() * components_, Complex{});
    exponents_.assign(grid_.rank(), 0.0);
}

void SampledField::setExponent(std::size_t axis, double p) {
    require(axis < grid_.rank(), ErrorCode::ShapeMismatch, "axis out of range");
    require(grid_.axis(axis).isFractional() || p == 0.0, ErrorCode::AxisRole,
            "singularity exponents are only defined on fractional axes");
    exponents_[axis] = p;
}

SampledField SampledField::fromRegular(Grid grid, std::size_t components, const PointFunction& g,
                                       std::vector<double> exponents) {
    SampledField f(std::move(grid), components);
    f.exponents_ = normalizeExponents(f.grid_, std::move(exponents));
    std::vector<double> x(f.grid_.rank());
    for (std::size_t p = 0; p < f.points(); ++p) {
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = f.grid_.coordinate(p, a);
        for (std::size_t c = 0; c < components; ++c) f.regularRef(p, c) = g(x, c);
    }
    return f;
}

SampledField SampledField::fromFunction(Grid grid, std::size_t components, const PointFunction& fn,
                                        std::vector<double> exponents) {
    SampledField f = fromRegular(std::move(grid), components, fn, std::move(exponents));
    for (std::size_t p = 0; p < f.points(); ++p) {
        const double w = f.powerWeight(p);
        for (std::size_t c = 0; c < components; ++c) f.regularRef(p, c) /= w;
    }
    return f;
}

double SampledField::powerWeight(std::size_t point) const {
    double w = 1.0;
    for (std::size_t a = 0; a < exponents_.size(); ++a) {
        if (exponents_[a] != 0.0) w *= std::pow(grid_.coordinate(point, a), exponents_[a]);
    }
    return w;
}

std::vector<Complex> SampledField::values() const {
    std::vector<Complex> out(values_.size());
    for (std::size_t p = 0; p < points(); ++p) {
        const double w = powerWeight(p);
        for (std::size_t c = 0; c < components_; ++c)
            out[p * components_ + c] = w * values_[p * components_ + c];
    }
    return out;
}

SampledField SampledField::retagged(std::size_t axis, double p) const {
    SampledField out = *this;
    const double shift = exponents_.at(axis) - p;
    out.setExponent(axis, p);
    if (shift == 0.0) return out;
    for (std::size_t q = 0; q < points(); ++q) {
        const double w = std::pow(grid_.coordinate(q, axis), shift);
        for (std::size_t c = 0; c < components_; ++c) out.regularRef(q, c) *= w;
    }
    return out;
}

SampledField SampledField::component(std::size_t comp) const {
    require(comp < components_, ErrorCode::ComponentMismatch, "component index out of range");
    SampledField out(grid_, 1);
    out.exponents_ = exponents_;
    for (std::size_t p = 0; p < points(); ++p) out.values_[p] = regular(p, comp);
    return out;
}

SampledField SampledField::stack(const std::vector<SampledField>& parts) {
    require(!parts.empty(), ErrorCode::ComponentMismatch, "nothing to stack");
    std::size_t total = 0;
    for (const auto& part : parts) {
        requireSameGrid(parts.front(), part, "stack");
        require(part.exponents_ == parts.front().exponents_, ErrorCode::ShapeMismatch,
                "stacked fields must share singularity exponents");
        total += part.components_;
    }
    SampledField out(parts.front().grid_, total);
    out.exponents_ = parts.front().exponents_;
    for (std::size_t p = 0; p < out.points(); ++p) {
        std::size_t c0 = 0;
        for (const auto& part : parts) {
            for (std::size_t c = 0; c < part.components_; ++c) out.regularRef(p, c0 + c) = part.regular(p, c);
            c0 += part.components_;
        }
    }
    return out;
}

bool SampledField::allFinite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

void SampledField::ensureFinite(const char* context) const {
    require(allFinite(), ErrorCode::Domain, std::string(context) + " produced non-finite samples");
}

void requireSameGrid(const SampledField& f, const SampledField& g, const char* context) {
    require(f.grid() == g.grid(), ErrorCode::GridMismatch, std::string(context) + ": grids differ");
}

namespace {

std::pair<SampledField, SampledField> aligned(const SampledField& f, const SampledField& g) {
    requireSameGrid(f, g, "field algebra");
    require(f.components() == g.components(), ErrorCode::ShapeMismatch,
            "field algebra: component counts differ");
    SampledField a = f;
    SampledField b = g;
    for (std::size_t axis = 0; axis < f.grid().rank(); ++axis) {
        const double p = std::min(f.exponent(axis), g.exponent(axis));
        if (a.exponent(axis) != p) a = a.retagged(axis, p);
        if (b.exponent(axis) != p) b = b.retagged(axis, p);
    }
    return {std::move(a), std::move(b)};
}

}  // namespace

SampledField add(const SampledField& f, const SampledField& g) {
    auto [a, b] = aligned(f, g);
    auto out = a.regular();
    auto rhs = b.regular();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += rhs[i];
    return a;
}

SampledField subtract(const SampledField& f, const SampledField& g) { return add(f, negate(g)); }

SampledField scale(const SampledField& f, Complex factor) {
    SampledField out = f;
    for (auto& v : out.regular()) v *= factor;
    return out;
}

SampledField negate(const SampledField& f) { return scale(f, -1.0); }

SampledField pointwiseMul(const SampledField& f,
                          const std::function<Complex(std::span<const double> x)>& profile) {
    SampledField out = f;
    const Grid& grid = f.grid();
    std::vector<double> x(grid.rank());
    for (std::size_t p = 0; p < f.points(); ++p) {
        for (std::size_t a = 0; a < x.size(); ++a)
            x[a] = grid.axis(a).isFractional() ? 0.0 : grid.coordinate(p, a);
        const Complex w = profile(x);
        for (std::size_t c = 0; c < f.components(); ++c) out.regularRef(p, c) *= w;
    }
    return out;
}

SampledField multiplyBy(const SampledField& f, const SampledField& profile) {
    requireSameGrid(f, profile, "multiplyBy");
    require(profile.components() == 1 || profile.components() == f.components(),
            ErrorCode::ComponentMismatch, "multiplyBy: component counts differ");
    SampledField out = f;
    for (std::size_t axis = 0; axis < f.grid().rank(); ++axis)
        out.setExponent(axis, f.exponent(axis) + profile.exponent(axis));
    for (std::size_t p = 0; p < f.points(); ++p)
        for (std::size_t c = 0; c < f.components(); ++c)
            out.regularRef(p, c) *= profile.regular(p, profile.components() == 1 ? 0 : c);
    return out;
}

SampledField contract(const SampledField& f, std::span<const Complex> coefficients) {
    require(coefficients.size() == f.components(), ErrorCode::ComponentMismatch,
            "contract: coefficient count differs from component count");
    SampledField out(f.grid(), 1);
    for (std::size_t axis = 0; axis < f.grid().rank(); ++axis) out.setExponent(axis, f.exponent(axis));
    for (std::size_t p = 0; p < f.points(); ++p) {
        Complex s{};
        for (std::size_t c = 0; c < f.components(); ++c) s += coefficients[c] * f.regular(p, c);
        out.regularRef(p) = s;
    }
    return out;
}

double maxNorm(const SampledField& f, const PointMask& mask) {
    double m = 0.0;
    for (std::size_t p = 0; p < f.points(); ++p) {
        if (mask && !mask(f.grid(), p)) continue;
        for (std::size_t c = 0; c < f.components(); ++c) m = std::max(m, std::abs(f.value(p, c)));
    }
    return m;
}

double l2Norm(const SampledField& f, const PointMask& mask) {
    std::vector<double> sq;
    sq.reserve(f.points() * f.components());
    for (std::size_t p = 0; p < f.points(); ++p) {
        if (mask && !mask(f.grid(), p)) continue;
        for (std::size_t c = 0; c < f.components(); ++c) sq.push_back(std::norm(f.value(p, c)));
    }
    if (sq.empty()) return 0.0;
    return std::sqrt(pairwiseSum(std::span<const double>(sq)) / static_cast<double>(sq.size()));
}

double maxDifference(const SampledField& f, const SampledField& g, const PointMask& mask) {
    return maxNorm(subtract(f, g), mask);
}

}  // namespace fracflux
