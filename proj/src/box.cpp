#include "mb/box.hpp"

#include <algorithm>

namespace mb {

double Box::width() const {
    double w = 0.0;
    for (const Interval& d : dims) w = std::max(w, d.width());
    return w;
}

bool Box::contains(const std::vector<double>& p) const {
    if (p.size() != dims.size()) return false;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (!dims[i].contains(p[i])) return false;
    return true;
}

bool Box::contains(const Box& inner) const {
    if (inner.size() != dims.size()) return false;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (!dims[i].contains(inner.dims[i])) return false;
    return true;
}

std::vector<double> box_center(const Box& b) {
    std::vector<double> c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = b.dims[i].mid();
    return c;
}

Box degenerate_box(const std::vector<double>& p) {
    std::vector<Interval> dims;
    dims.reserve(p.size());
    for (double v : p) dims.emplace_back(v);
    return Box(std::move(dims));
}

std::vector<Interval> uniform_subdivide(const Interval& a, int n_cells) {
    if (n_cells < 1) throw std::invalid_argument("subdivision count must be >= 1");
    if (n_cells == 1 || a.degenerate()) return {a};
    std::vector<Interval> cells;
    cells.reserve(n_cells);
    double h = (a.hi - a.lo) / n_cells;
    double left = a.lo;
    for (int i = 1; i < n_cells; ++i) {
        double right = a.lo + i * h;
        if (right > a.hi) right = a.hi;
        if (right < left) right = left;
        cells.emplace_back(left, right);
        left = right;
    }
    cells.emplace_back(left, a.hi);
    return cells;
}

} // namespace mb
