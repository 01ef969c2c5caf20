#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fracflux {

enum class AxisRole { Fractional, Classical };
enum class Topology { HalfLine, Periodic, TruncatedLine };

const char* toString(AxisRole role);
const char* toString(Topology topology);

/// One axis of a tensor-product grid.
///
/// Fractional axes live on the half line (0, length] and never carry a node at
/// t = 0. Their nodes follow t_i = length * ((i + 1) / nodes)^grading, so the
/// uniform mesh is grading == 1. Classical axes are either periodic on
/// [-length/2, length/2) with a node at 0, or a truncated line whose nodes sit
/// at cell centres of [-length/2, length/2] (no node at 0 for even counts).
struct AxisSpec {
    AxisRole role = AxisRole::Classical;
    double length = 1.0;
    std::size_t nodes = 1;
    double grading = 1.0;
    Topology topology = Topology::Periodic;

    static AxisSpec fractional(double length, std::size_t nodes, double grading = 1.0);
    static AxisSpec periodic(double length, std::size_t nodes);
    static AxisSpec truncatedLine(double length, std::size_t nodes);

    /// Throws Error(Precondition) when the axis violates its invariants.
    void validate() const;

    double coordinate(std::size_t i) const;
    std::vector<double> coordinates() const;

    /// Uniform spacing of a classical axis.
    double spacing() const;

    bool isFractional() const { return role == AxisRole::Fractional; }

    bool operator==(const AxisSpec&) const = default;
};

/// Row-major tensor-product grid: axis 0 varies slowest.
class Grid {
  public:
    Grid() = default;
    explicit Grid(std::vector<AxisSpec> axes);

    std::size_t rank() const { return axes_.size(); }
    const AxisSpec& axis(std::size_t a) const { return axes_.at(a); }
    const std::vector<AxisSpec>& axes() const { return axes_; }

    std::size_t extent(std::size_t a) const { return axes_[a].nodes; }
    std::size_t stride(std::size_t a) const { return strides_[a]; }
    std::size_t size() const { return size_; }

    std::vector<std::size_t> unflatten(std::size_t flat) const;
    std::size_t flatten(const std::vector<std::size_t>& index) const;
    std::size_t indexAlong(std::size_t flat, std::size_t a) const {
        return (flat / strides_[a]) % axes_[a].nodes;
    }

    /// Coordinate along axis a of the grid point `flat`.
    double coordinate(std::size_t flat, std::size_t a) const;

    std::vector<std::size_t> fractionalAxes() const;
    std::vector<std::size_t> classicalAxes() const;

    bool operator==(const Grid& other) const { return axes_ == other.axes_; }

  private:
    std::vector<AxisSpec> axes_;
    std::vector<std::size_t> strides_;
    std::vector<std::vector<double>> coords_;
    std::size_t size_ = 0;
};

}  // namespace fracflux
