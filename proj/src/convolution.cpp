#include "fracflux/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "fracflux/error.hpp"
#include "fracflux/interpolation.hpp"
#include "fracflux/quadrature.hpp"

namespace fracflux {

namespace {

struct QuadTerm {
    double weight;
    Stencil left;   // reads F at t (1 - u)
    Stencil right;  // reads G at t u
};

// Terms of int_0^1 (1-u)^a u^b F(t(1-u)) G(tu) du for each node t_i.
std::vector<std::vector<QuadTerm>> axisTerms(const AxisSpec& axis, double a, double b,
                                             std::size_t q) {
    const double r = axis.grading;
    const FractionalAxisInterpolator interp(axis);
    // u = v^r / 2 near u = 0 and 1 - u = w^r / 2 near u = 1.
    const GaussRule lo = gaussJacobi01(q, 0.0, r * (b + 1.0) - 1.0);
    const GaussRule hi = gaussJacobi01(q, 0.0, r * (a + 1.0) - 1.0);
    const double loScale = r * std::pow(2.0, -(b + 1.0));
    const double hiScale = r * std::pow(2.0, -(a + 1.0));

    std::vector<std::vector<QuadTerm>> out(axis.nodes);
    for (std::size_t i = 0; i < axis.nodes; ++i) {
        const double t = axis.coordinate(i);
        auto& terms = out[i];
        terms.reserve(2 * q);
        for (std::size_t k = 0; k < q; ++k) {
            const double u = 0.5 * std::pow(lo.nodes[k], r);
            const double w = lo.weights[k] * loScale * std::pow(1.0 - u, a);
            terms.push_back({w, interp.stencil(t * (1.0 - u), 1.0), interp.stencil(t * u, 1.0)});
        }
        for (std::size_t k = 0; k < q; ++k) {
            const double s = 0.5 * std::pow(hi.nodes[k], r);
            const double w = hi.weights[k] * hiScale * std::pow(1.0 - s, b);
            terms.push_back({w, interp.stencil(t * s, 1.0), interp.stencil(t * (1.0 - s), 1.0)});
        }
    }
    return out;
}

// Lexicographic order on (exponents, regular values); decides operand order.
bool canonicalLess(const SampledField& f, const SampledField& g) {
    if (f.exponents() != g.exponents()) return f.exponents() < g.exponents();
    if (f.components() != g.components()) return f.components() < g.components();
    auto x = f.regular();
    auto y = g.regular();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].real() != y[i].real()) return x[i].real() < y[i].real();
        if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
    }
    return false;
}

// Tensor-product stencil read: sum over k of prod_a w_a[k_a] * data[base + sum (start_a + k_a) stride_a].
Complex tensorRead(const SampledField& f, std::size_t comp, std::size_t base,
                   const std::vector<std::size_t>& strides, const std::vector<const Stencil*>& st) {
    const std::size_t d = st.size();
    std::size_t count = 1;
    for (std::size_t a = 0; a < d; ++a) count *= kStencilWidth;
    std::vector<std::size_t> k(d, 0);
    Complex sum{};
    for (std::size_t n = 0; n < count; ++n) {
        double w = 1.0;
        std::size_t idx = base;
        for (std::size_t a = 0; a < d; ++a) {
            w *= st[a]->w[k[a]];
            idx += (st[a]->start + k[a]) * strides[a];
        }
        sum += w * f.regular(idx, comp);
        for (std::size_t a = 0; a < d; ++a) {
            if (++k[a] < kStencilWidth) break;
            k[a] = 0;
        }
    }
    return sum;
}

}  // namespace

SampledField laplaceConvolve(const SampledField& fIn, const SampledField& gIn,
                             const std::vector<std::size_t>& axes, const ConvolutionOptions& options) {
    requireSameGrid(fIn, gIn, "laplaceConvolve");
    const Grid& grid = fIn.grid();
    require(!axes.empty(), ErrorCode::Precondition, "laplaceConvolve: no axes given");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        require(axes[i] < grid.rank(), ErrorCode::ShapeMismatch, "laplaceConvolve: axis out of range");
        require(grid.axis(axes[i]).isFractional(), ErrorCode::AxisRole,
                "laplaceConvolve: convolution axes must be fractional");
        for (std::size_t j = 0; j < i; ++j)
            require(axes[i] != axes[j], ErrorCode::Precondition, "laplaceConvolve: repeated axis");
    }
    require(fIn.components() == gIn.components() || fIn.components() == 1 || gIn.components() == 1,
            ErrorCode::ComponentMismatch, "laplaceConvolve: component counts do not conform");

    const bool swap = canonicalLess(gIn, fIn);
    const SampledField& f = swap ? gIn : fIn;
    const SampledField& g = swap ? fIn : gIn;

    for (std::size_t a : axes) {
        require(f.exponent(a) > -1.0 && g.exponent(a) > -1.0, ErrorCode::Precondition,
                "laplaceConvolve: singularity exponent must exceed -1");
    }

    std::vector<std::vector<std::vector<QuadTerm>>> terms;
    std::vector<std::size_t> strides;
    for (std::size_t a : axes) {
        terms.push_back(axisTerms(grid.axis(a), f.exponent(a), g.exponent(a), options.quadratureNodes));
        strides.push_back(grid.stride(a));
    }

    const std::size_t comps = std::max(f.components(), g.components());
    SampledField out(grid, comps);
    for (std::size_t a = 0; a < grid.rank(); ++a) {
        const bool conv = std::find(axes.begin(), axes.end(), a) != axes.end();
        if (grid.axis(a).isFractional())
            out.setExponent(a, conv ? f.exponent(a) + g.exponent(a) + 1.0 : f.exponent(a) + g.exponent(a));
    }

    const std::size_t d = axes.size();
    const auto npts = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
    for (long pp = 0; pp < npts; ++pp) {
        const auto p = static_cast<std::size_t>(pp);
        std::size_t base = p;
        std::vector<const std::vector<QuadTerm>*> local(d);
        std::size_t combos = 1;
        for (std::size_t a = 0; a < d; ++a) {
            const std::size_t i = grid.indexAlong(p, axes[a]);
            base -= i * strides[a];
            local[a] = &terms[a][i];
            combos *= local[a]->size();
        }
        std::vector<const Stencil*> left(d);
        std::vector<const Stencil*> right(d);
        std::vector<std::size_t> q(d, 0);
        std::vector<Complex> acc(combos);
        for (std::size_t c = 0; c < comps; ++c) {
            const std::size_t cf = f.components() == 1 ? 0 : c;
            const std::size_t cg = g.components() == 1 ? 0 : c;
            std::fill(q.begin(), q.end(), 0);
            for (std::size_t n = 0; n < combos; ++n) {
                double w = 1.0;
                for (std::size_t a = 0; a < d; ++a) {
                    const QuadTerm& term = (*local[a])[q[a]];
                    w *= term.weight;
                    left[a] = &term.left;
                    right[a] = &term.right;
                }
                acc[n] = w * tensorRead(f, cf, base, strides, left) * tensorRead(g, cg, base, strides, right);
                for (std::size_t a = 0; a < d; ++a) {
                    if (++q[a] < local[a]->size()) break;
                    q[a] = 0;
                }
            }
            out.regularRef(p, c) = pairwiseSum(std::span<const Complex>(acc));
        }
    }
    out.ensureFinite("laplaceConvolve");
    return out;
}

SampledField laplaceConvolve(const SampledField& f, const SampledField& g, std::size_t axis,
                             const ConvolutionOptions& options) {
    return laplaceConvolve(f, g, std::vector<std::size_t>{axis}, options);
}

SampledField powerKernel(const Grid& grid, std::size_t axis, double p) {
    require(axis < grid.rank() && grid.axis(axis).isFractional(), ErrorCode::AxisRole,
            "powerKernel needs a fractional axis");
    require(p > 0.0, ErrorCode::Precondition, "powerKernel needs p > 0");
    SampledField k(grid, 1);
    const double c = rgamma(p);
    for (auto& v : k.regular()) v = c;
    k.setExponent(axis, p - 1.0);
    return k;
}

SampledField applyEuler(const SampledField& f, std::size_t axis, double c0, double c1, double c2) {
    const Grid& grid = f.grid();
    require(axis < grid.rank() && grid.axis(axis).isFractional(), ErrorCode::AxisRole,
            "Euler operator needs a fractional axis");
    const FractionalAxisInterpolator interp(grid.axis(axis));
    std::vector<Stencil> st(grid.extent(axis));
    // Derivative part only; applied to differences from the centre sample so
    // constants are annihilated exactly despite weights of size N^2.
    for (std::size_t i = 0; i < st.size(); ++i) st[i] = interp.nodeStencil(i, 0.0, c1, c2);

    SampledField out = f;
    const std::size_t stride = grid.stride(axis);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const std::size_t i = grid.indexAlong(p, axis);
        const std::size_t base = p - i * stride;
        const Stencil& s = st[i];
        for (std::size_t c = 0; c < f.components(); ++c) {
            const Complex centre = f.regular(p, c);
            Complex v{};
            for (std::size_t k = 0; k < kStencilWidth; ++k)
                v += s.w[k] * (f.regular(base + (s.start + k) * stride, c) - centre);
            out.regularRef(p, c) = c0 * centre + v;
        }
    }
    return out;
}

std::vector<Complex> sampleAlong(const SampledField& f, std::size_t axis, double t) {
    const Grid& grid = f.grid();
    require(axis < grid.rank() && grid.axis(axis).isFractional(), ErrorCode::AxisRole,
            "sampleAlong needs a fractional axis");
    const FractionalAxisInterpolator interp(grid.axis(axis));
    const Stencil s = interp.stencil(t, 1.0);
    const double w = std::pow(t, f.exponent(axis));
    const std::size_t stride = grid.stride(axis);
    std::vector<Complex> out;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        if (grid.indexAlong(p, axis) != 0) continue;
        for (std::size_t c = 0; c < f.components(); ++c) {
            Complex v{};
            for (std::size_t k = 0; k < kStencilWidth; ++k) v += s.w[k] * f.regular(p + (s.start + k) * stride, c);
            // Remaining power weights of the other axes.
            double other = 1.0;
            for (std::size_t a = 0; a < grid.rank(); ++a)
                if (a != axis && f.exponent(a) != 0.0) other *= std::pow(grid.coordinate(p, a), f.exponent(a));
            out.push_back(w * other * v);
        }
    }
    return out;
}

}  // namespace fracflux
