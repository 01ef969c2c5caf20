#pragma once

#include <cstddef>
#include <vector>

#include "fracflux/field.hpp"

namespace fracflux {

struct ConvolutionOptions {
    /// Gauss-Jacobi nodes per half of the split convolution integral.
    std::size_t quadratureNodes = 32;
};

/// Laplace convolution (f * g)(t) = int_0^t f(t - s) g(s) ds along every axis
/// in `axes` (all fractional); other axes are carried pointwise.
///
/// With f = t^a F and g = t^b G the result is t^{a+b+1} H where
/// H(t) = int_0^1 (1 - u)^a u^b F(t (1 - u)) G(t u) du. The u-interval is split
/// at 1/2 and each half is mapped so that the endpoint power and the mesh
/// grading are absorbed into a Gauss-Jacobi weight; F and G are read off their
/// local interpolants. Operands are put into a canonical order first, so
/// f * g and g * f agree bit for bit.
///
/// Components: equal counts multiply componentwise, a single-component operand
/// broadcasts.
SampledField laplaceConvolve(const SampledField& f, const SampledField& g,
                             const std::vector<std::size_t>& axes,
                             const ConvolutionOptions& options = {});

SampledField laplaceConvolve(const SampledField& f, const SampledField& g, std::size_t axis,
                             const ConvolutionOptions& options = {});

/// Phi_p(t) = t^{p - 1} / Gamma(p) along `axis`, constant elsewhere. Stored
/// exactly: exponent p - 1, regular factor 1 / Gamma(p).
SampledField powerKernel(const Grid& grid, std::size_t axis, double p);

/// Field whose regular factor is c0 F + c1 theta F + c2 theta^2 F along a
/// fractional axis (theta = t d/dt acting on the regular factor only), with the
/// exponent left unchanged.
SampledField applyEuler(const SampledField& f, std::size_t axis, double c0, double c1, double c2);

/// Values of f at an off-grid time t along a fractional axis, one per point of
/// the remaining axes (flat order, components innermost).
std::vector<Complex> sampleAlong(const SampledField& f, std::size_t axis, double t);

}  // namespace fracflux
