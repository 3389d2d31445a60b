#pragma once

#include <vector>

#include "mb/interval.hpp"

namespace mb {

/// Axis-aligned product of intervals, one per variable.
struct Box {
    std::vector<Interval> dims;

    Box() = default;
    explicit Box(std::vector<Interval> d) : dims(std::move(d)) {
        if (dims.empty()) throw std::invalid_argument("box must have at least one dimension");
    }

    std::size_t size() const { return dims.size(); }

    /// Largest per-dimension width.
    double width() const;

    bool contains(const std::vector<double>& p) const;
    bool contains(const Box& inner) const;
};

/// Coordinate-wise midpoint (lo + hi) / 2.
std::vector<double> box_center(const Box& b);

/// Box collapsed to a single point, used to evaluate enclosures of point values.
Box degenerate_box(const std::vector<double>& p);

/// N subintervals covering a exactly: consecutive cells share endpoints and
/// the last cell is pinned to a.hi so the union equals the input even when
/// the step is not representable.
std::vector<Interval> uniform_subdivide(const Interval& a, int n_cells);

} // namespace mb
