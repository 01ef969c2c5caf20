#include "fracflux/grid.hpp"

#include <cmath>

#include "fracflux/error.hpp"

namespace fracflux {

const char* toString(AxisRole role) {
    return role == AxisRole::Fractional ? "fractional" : "classical";
}

const char* toString(Topology topology) {
    switch (topology) {
        case Topology::HalfLine: return "halfline";
        case Topology::Periodic: return "periodic";
        case Topology::TruncatedLine: return "truncated-line";
    }
    return "?";
}

AxisSpec AxisSpec::fractional(double length, std::size_t nodes, double grading) {
    AxisSpec a{AxisRole::Fractional, length, nodes, grading, Topology::HalfLine};
    a.validate();
    return a;
}

AxisSpec AxisSpec::periodic(double length, std::size_t nodes) {
    AxisSpec a{AxisRole::Classical, length, nodes, 1.0, Topology::Periodic};
    a.validate();
    return a;
}

AxisSpec AxisSpec::truncatedLine(double length, std::size_t nodes) {
    AxisSpec a{AxisRole::Classical, length, nodes, 1.0, Topology::TruncatedLine};
    a.validate();
    return a;
}

void AxisSpec::validate() const {
    require(std::isfinite(length) && length > 0.0, ErrorCode::Precondition,
            "axis length must be positive");
    require(nodes >= 1, ErrorCode::Precondition, "axis needs at least one node");
    if (role == AxisRole::Fractional) {
        require(topology == Topology::HalfLine, ErrorCode::Precondition,
                "fractional axes must be half lines");
        require(grading >= 1.0, ErrorCode::Precondition, "grading exponent must be >= 1");
        require(nodes >= 6, ErrorCode::Precondition,
                "fractional axes need at least 6 nodes for the interpolation stencil");
    } else {
        require(topology != Topology::HalfLine, ErrorCode::Precondition,
                "classical axes are periodic or truncated lines");
        require(grading == 1.0, ErrorCode::Precondition, "classical axes are uniform");
    }
}

double AxisSpec::coordinate(std::size_t i) const {
    const double n = static_cast<double>(nodes);
    switch (topology) {
        case Topology::HalfLine:
            return length * std::pow(static_cast<double>(i + 1) / n, grading);
        case Topology::Periodic:
            return -0.5 * length + length * static_cast<double>(i) / n;
        case Topology::TruncatedLine:
            return -0.5 * length + length * (static_cast<double>(i) + 0.5) / n;
    }
    return 0.0;
}

std::vector<double> AxisSpec::coordinates() const {
    std::vector<double> c(nodes);
    for (std::size_t i = 0; i < nodes; ++i) c[i] = coordinate(i);
    return c;
}

double AxisSpec::spacing() const {
    require(role == AxisRole::Classical, ErrorCode::AxisRole, "spacing of a fractional axis");
    return length / static_cast<double>(nodes);
}

Grid::Grid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
    for (const auto& a : axes_) a.validate();
    strides_.assign(axes_.size(), 1);
    size_ = 1;
    for (std::size_t a = axes_.size(); a-- > 0;) {
        strides_[a] = size_;
        size_ *= axes_[a].nodes;
    }
    coords_.reserve(axes_.size());
    for (const auto& a : axes_) coords_.push_back(a.coordinates());
}

std::vector<std::size_t> Grid::unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) idx[a] = indexAlong(flat, a);
    return idx;
}

std::size_t Grid::flatten(const std::vector<std::size_t>& index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) flat += index[a] * strides_[a];
    return flat;
}

double Grid::coordinate(std::size_t flat, std::size_t a) const {
    return coords_[a][indexAlong(flat, a)];
}

std::vector<std::size_t> Grid::fractionalAxes() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (axes_[a].isFractional()) out.push_back(a);
    return out;
}

std::vector<std::size_t> Grid::classicalAxes() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < axes_.size(); ++a)
        if (!axes_[a].isFractional()) out.push_back(a);
    return out;
}

}  // namespace fracflux
