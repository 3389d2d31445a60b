#include "mb/extension.hpp"

#include <exception>
#include <functional>

#ifdef MB_HAVE_OPENMP
#include <omp.h>
#endif

namespace mb {

Interval mean_value(const Expr& e, const Box& box, DerivMode mode) {
    std::vector<double> m = box_center(box);
    Interval acc = eval_interval(e, degenerate_box(m));
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (box.dims[i].degenerate()) continue;
        Interval d = eval_derivative(e, box, i, mode);
        acc = acc + d * (box.dims[i] - Interval(m[i]));
    }
    return acc;
}

namespace detail {

namespace {

struct Grid {
    std::vector<std::vector<Interval>> cells_per_dim;
    std::size_t total = 1;

    explicit Grid(const Box& box, int n_cells) {
        cells_per_dim.reserve(box.size());
        for (const Interval& d : box.dims) {
            cells_per_dim.push_back(uniform_subdivide(d, d.degenerate() ? 1 : n_cells));
            total *= cells_per_dim.back().size();
        }
    }

    // Lexicographic decode: the first dimension varies fastest.
    Box cell(std::size_t flat) const {
        std::vector<Interval> dims;
        dims.reserve(cells_per_dim.size());
        for (const auto& cells : cells_per_dim) {
            dims.push_back(cells[flat % cells.size()]);
            flat /= cells.size();
        }
        return Box(std::move(dims));
    }
};

} // namespace

Interval refined_hull_serial(const Box& box, int n_cells,
                             const std::function<Interval(const Box&)>& f) {
    Grid grid(box, n_cells);
    Interval acc = f(grid.cell(0));
    for (std::size_t i = 1; i < grid.total; ++i) acc = hull(acc, f(grid.cell(i)));
    return acc;
}

Interval refined_hull_parallel(const Box& box, int n_cells,
                               const std::function<Interval(const Box&)>& f) {
#ifndef MB_HAVE_OPENMP
    return refined_hull_serial(box, n_cells, f);
#else
    Grid grid(box, n_cells);
    if (grid.total == 1) return f(grid.cell(0));

    std::vector<Interval> results(grid.total);
    std::vector<std::exception_ptr> errors(grid.total);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)grid.total; ++i) {
        try {
            results[i] = f(grid.cell((std::size_t)i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    // The lowest failing cell wins so diagnostics match the serial kernel.
    for (std::size_t i = 0; i < grid.total; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);

    Interval acc = results[0];
    for (std::size_t i = 1; i < grid.total; ++i) acc = hull(acc, results[i]);
    return acc;
#endif
}

} // namespace detail

namespace {

Interval refined_hull(const Box& box, int n_cells, Exec exec,
                      const std::function<Interval(const Box&)>& f) {
    return exec == Exec::parallel ? detail::refined_hull_parallel(box, n_cells, f)
                                  : detail::refined_hull_serial(box, n_cells, f);
}

} // namespace

Interval mean_value_refinement(const Expr& e, const Box& box, int n_cells, DerivMode mode,
                               Exec exec) {
    return refined_hull(box, n_cells, exec,
                        [&](const Box& cell) { return mean_value(e, cell, mode); });
}

Interval affine_refinement(const Expr& e, const Box& box, int n_cells, Exec exec) {
    return refined_hull(box, n_cells, exec,
                        [&](const Box& cell) { return eval_affine(e, cell); });
}

} // namespace mb
