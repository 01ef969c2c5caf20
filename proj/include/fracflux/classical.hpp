#pragma once

#include <cstddef>
#include <vector>

#include "fracflux/field.hpp"

namespace fracflux {

inline constexpr int kMaxClassicalOrder = 4;

/// d^order / dx^order along a classical axis.
///
/// Periodic axes are differentiated spectrally (the Nyquist mode is dropped
/// for odd orders). Truncated-line axes use fourth-order finite differences,
/// centred in the interior and one-sided near the ends.
SampledField classicalDerivative(const SampledField& f, std::size_t axis, int order = 1);

/// Finite-difference weights for the derivative of the given order at x0 from
/// samples at `nodes` (Fornberg's recursion).
std::vector<double> finiteDifferenceWeights(double x0, const std::vector<double>& nodes, int order);

}  // namespace fracflux
