#pragma once

#include <array>
#include <cstddef>

#include "fracflux/grid.hpp"

namespace fracflux {

inline constexpr std::size_t kStencilWidth = 6;

/// Linear functional on `kStencilWidth` consecutive samples starting at `start`.
struct Stencil {
    std::size_t start = 0;
    std::array<double, kStencilWidth> w{};
};

/// Local degree-5 Lagrange interpolation along a fractional axis.
///
/// Interpolation runs in the mesh index variable xi = N (t / T)^{1/r}, in which
/// the nodes are the integers 1..N. Functions that are smooth in t^{1/r} (for
/// example power series in t^alpha on a mesh graded with r = 1/alpha) are
/// therefore interpolated to high order all the way down to t = 0. The region
/// (0, t_1) is covered by extrapolating the first stencil.
///
/// Besides values, stencils for the Euler operator theta = t d/dt and its
/// square are available; these are what the fractional derivative needs.
class FractionalAxisInterpolator {
  public:
    explicit FractionalAxisInterpolator(const AxisSpec& axis);

    /// Stencil for c0 F(t) + c1 (theta F)(t) + c2 (theta^2 F)(t).
    Stencil stencil(double t, double c0, double c1 = 0.0, double c2 = 0.0) const;

    /// Stencil evaluating at node i exactly.
    Stencil nodeStencil(std::size_t i, double c0, double c1 = 0.0, double c2 = 0.0) const;

    double indexCoordinate(double t) const;

  private:
    Stencil build(double xi, double c0, double c1, double c2) const;

    double length_;
    double grading_;
    std::size_t nodes_;
};

}  // namespace fracflux
