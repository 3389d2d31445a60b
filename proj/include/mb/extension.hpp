#pragma once

#include <functional>

#include "mb/expr.hpp"

namespace mb {

enum class Exec { serial, parallel };

/// Mean value extension: f(m) + sum_i [df/dx_i](box) * (box_i - m_i) over the
/// non-degenerate dimensions, m the box center.
Interval mean_value(const Expr& e, const Box& box, DerivMode mode = DerivMode::ad);

/// Hull of `mean_value` over the uniform grid of n_cells subintervals per
/// non-degenerate dimension.  The parallel kernel evaluates cells
/// concurrently and folds them in lexicographic cell order, so both
/// executions produce bit-identical results.
Interval mean_value_refinement(const Expr& e, const Box& box, int n_cells,
                               DerivMode mode = DerivMode::ad, Exec exec = Exec::serial);

/// Hull of the affine natural extension over the same grid.
Interval affine_refinement(const Expr& e, const Box& box, int n_cells,
                           Exec exec = Exec::serial);

namespace detail {

/// Serial reference kernel: evaluate `f` on every grid cell in lexicographic
/// order and fold with hull.
Interval refined_hull_serial(const Box& box, int n_cells,
                             const std::function<Interval(const Box&)>& f);

/// OpenMP kernel; identical results, cells evaluated concurrently.
Interval refined_hull_parallel(const Box& box, int n_cells,
                               const std::function<Interval(const Box&)>& f);

} // namespace detail

} // namespace mb
