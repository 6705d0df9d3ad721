#pragma once

#include <cstddef>
#include <string>

#include "phaseq/errors.hpp"

namespace phaseq {

// Uniform 1-D axis. Spacing is derived from (lower, upper, count), never stored,
// so spacing * (count - 1) == upper - lower holds in the representation itself.
//
// Periodic axes include both endpoints as samples of the same physical point;
// neighbour indexing wraps modulo (count - 1).
struct Grid1D {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t count = 9;
    bool periodic = false;

    Grid1D(double lo, double hi, std::size_t n, bool wrap = false)
        : lower(lo), upper(hi), count(n), periodic(wrap) {
        if (!(lower < upper))
            throw domain_error("Grid1D: lower bound must be strictly below upper bound");
        if (count < 9)
            throw domain_error("Grid1D: count must be >= 9, got " + std::to_string(count));
    }

    double spacing() const { return (upper - lower) / static_cast<double>(count - 1); }
    double point(std::size_t i) const { return lower + static_cast<double>(i) * spacing(); }
    double extent() const { return upper - lower; }

    bool operator==(const Grid1D&) const = default;
};

// Which conjugate-variable plane a grid discretizes. axis_a is the first
// (position-like) coordinate, axis_b its conjugate partner, except on
// energy-time grids where axis_a is E and axis_b is t.
enum class AxesKind {
    position_momentum,
    energy_time,
    angle_angular_momentum,
};

std::string to_string(AxesKind kind);

// Rectangular phase-space domain: the tensor product of two axes.
struct PhaseGrid {
    Grid1D axis_a;
    Grid1D axis_b;
    AxesKind kind = AxesKind::position_momentum;

    PhaseGrid(Grid1D a, Grid1D b, AxesKind k = AxesKind::position_momentum)
        : axis_a(a), axis_b(b), kind(k) {
        if (kind == AxesKind::angle_angular_momentum && !axis_a.periodic)
            throw domain_error("PhaseGrid: angle axis must be periodic");
    }

    std::size_t size() const { return axis_a.count * axis_b.count; }

    bool operator==(const PhaseGrid&) const = default;
};

enum class Axis { a, b };

inline const Grid1D& axis_of(const PhaseGrid& grid, Axis axis) {
    return axis == Axis::a ? grid.axis_a : grid.axis_b;
}

} // namespace phaseq
