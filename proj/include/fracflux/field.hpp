#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracflux/grid.hpp"

namespace fracflux {

using Complex = std::complex<double>;

/// Samples of a (possibly vector-valued) function on a tensor-product grid.
///
/// On fractional axes the stored numbers are the regular factor g of
/// f = prod_k t_k^{p_k} * g, where p_k is the singularity exponent of axis k
/// (zero when the field is untagged). Every operation that needs the function
/// itself multiplies the power factor back in; the exponents let quadratures
/// treat integrable endpoint singularities exactly.
class SampledField {
  public:
    using PointFunction = std::function<Complex(std::span<const double> x, std::size_t comp)>;

    SampledField() = default;
    explicit SampledField(Grid grid, std::size_t components = 1);

    /// Samples f(x) and stores f / prod t^p, so `exponents` only changes the
    /// internal representation.
    static SampledField fromFunction(Grid grid, std::size_t components, const PointFunction& f,
                                     std::vector<double> exponents = {});
    /// Samples the regular factor directly.
    static SampledField fromRegular(Grid grid, std::size_t components, const PointFunction& g,
                                    std::vector<double> exponents = {});

    const Grid& grid() const { return grid_; }
    std::size_t components() const { return components_; }
    std::size_t points() const { return grid_.size(); }

    std::span<const Complex> regular() const { return values_; }
    std::span<Complex> regular() { return values_; }
    Complex regular(std::size_t point, std::size_t comp = 0) const {
        return values_[point * components_ + comp];
    }
    Complex& regularRef(std::size_t point, std::size_t comp = 0) {
        return values_[point * components_ + comp];
    }

    double exponent(std::size_t axis) const { return exponents_.at(axis); }
    const std::vector<double>& exponents() const { return exponents_; }
    void setExponent(std::size_t axis, double p);

    /// Same function, represented with exponent p on `axis` (values rescaled).
    SampledField retagged(std::size_t axis, double p) const;

    /// prod_k t_k^{p_k} at a grid point.
    double powerWeight(std::size_t point) const;
    Complex value(std::size_t point, std::size_t comp = 0) const {
        return powerWeight(point) * regular(point, comp);
    }
    std::vector<Complex> values() const;

    SampledField component(std::size_t comp) const;
    static SampledField stack(const std::vector<SampledField>& parts);

    bool allFinite() const;
    /// Throws Error(Domain) when any sample is NaN or infinite.
    void ensureFinite(const char* context) const;

  private:
    Grid grid_;
    std::size_t components_ = 0;
    std::vector<Complex> values_;
    std::vector<double> exponents_;
};

void requireSameGrid(const SampledField& f, const SampledField& g, const char* context);

// Elementwise algebra. Operands with different exponents are first brought to
// the smaller exponent on each axis, which is exact.
SampledField add(const SampledField& f, const SampledField& g);
SampledField subtract(const SampledField& f, const SampledField& g);
SampledField scale(const SampledField& f, Complex factor);
SampledField negate(const SampledField& f);
/// Multiplies by a profile that depends on classical coordinates only.
SampledField pointwiseMul(const SampledField& f,
                          const std::function<Complex(std::span<const double> x)>& profile);
/// Elementwise product of a field with a field that has no fractional axes
/// dependence (e.g. an initial profile replicated along t).
SampledField multiplyBy(const SampledField& f, const SampledField& profile);
/// Sum over components weighted by a row of coefficients.
SampledField contract(const SampledField& f, std::span<const Complex> coefficients);

using PointMask = std::function<bool(const Grid&, std::size_t point)>;

double maxNorm(const SampledField& f, const PointMask& mask = {});
/// Root mean square over the (masked) samples.
double l2Norm(const SampledField& f, const PointMask& mask = {});
double maxDifference(const SampledField& f, const SampledField& g, const PointMask& mask = {});

/// Sum with a fixed pairwise tree, independent of thread count.
Complex pairwiseSum(std::span<const Complex> terms);
double pairwiseSum(std::span<const double> terms);

}  // namespace fracflux
