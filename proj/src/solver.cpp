#include "mb/solver.hpp"

#include <algorithm>
#include <cmath>

#ifdef MB_HAVE_OPENMP
#include <omp.h>
#endif

namespace mb {

const char* to_string(Sign s) {
    switch (s) {
    case Sign::plus: return "+";
    case Sign::minus: return "-";
    case Sign::unknown: return "?";
    }
    return "?";
}

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::bad_initial_box: return "bad_initial_box";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::iteration_cap: return "iteration_cap";
    }
    return "?";
}

Face face_of(const Box& box, std::size_t dim, Face::Side side) {
    Face f;
    f.box = box;
    f.fixed_dim = dim;
    f.side = side;
    double v = side == Face::Side::low ? box.dims[dim].lo : box.dims[dim].hi;
    f.box.dims[dim] = Interval(v);
    return f;
}

SignResult posneg(const Expr& e, const Box& face_domain, int n_cells, DerivMode mode,
                  Exec exec) {
    SignResult out;
    std::string first_error;
    try {
        Interval mv = mean_value_refinement(e, face_domain, n_cells, mode, exec);
        if (mv.lo >= 0.0) {
            out.value = Sign::plus;
            return out;
        }
        if (mv.hi <= 0.0) {
            out.value = Sign::minus;
            return out;
        }
    } catch (const std::exception& ex) {
        first_error = ex.what();
    }
    try {
        Interval aff = affine_refinement(e, face_domain, n_cells, exec);
        if (aff.lo >= 0.0) {
            out.value = Sign::plus;
            return out;
        }
        if (aff.hi <= 0.0) {
            out.value = Sign::minus;
            return out;
        }
    } catch (const std::exception& ex) {
        out.diagnostic = first_error.empty() ? ex.what() : first_error + "; " + ex.what();
        return out;
    }
    out.diagnostic = first_error;
    return out;
}

PreconditionedSystem PreconditionedSystem::identity(const SystemDef& sys) {
    PreconditionedSystem p;
    p.base = &sys;
    p.m = Matrix::identity(sys.size());
    p.is_identity = true;
    p.components = sys.funcs;
    return p;
}

Matrix invert(const Matrix& a) {
    std::size_t n = a.n;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::fabs(a.at(i, j));
        norm = std::max(norm, row);
    }
    double tol = 1e-12 * std::max(norm, 1e-300);

    if (n == 2) {
        double det = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
        // Equivalent of the pivot test: |det| / ||A|| is the second pivot.
        if (det == 0.0 || std::fabs(det) <= tol * norm)
            throw SingularMatrixError("Jacobian is numerically singular");
        Matrix r(2);
        r.at(0, 0) = a.at(1, 1) / det;
        r.at(0, 1) = -a.at(0, 1) / det;
        r.at(1, 0) = -a.at(1, 0) / det;
        r.at(1, 1) = a.at(0, 0) / det;
        return r;
    }

    // Gauss-Jordan with partial pivoting on an augmented copy.
    Matrix w = a;
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::fabs(w.at(i, col)) > std::fabs(w.at(pivot, col))) pivot = i;
        if (std::fabs(w.at(pivot, col)) < tol)
            throw SingularMatrixError("Jacobian is numerically singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w.at(pivot, j), w.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        double p = w.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            w.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            double f = w.at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w.at(i, j) -= f * w.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

PreconditionedSystem precondition(const PreconditionedSystem& sys,
                                  const std::vector<double>& c) {
    const SystemDef& base = *sys.base;
    Matrix j = jacobian_at(base, c);
    Matrix m = invert(j);

    PreconditionedSystem p;
    p.base = sys.base;
    p.m = m;
    p.is_identity = false;
    p.center_used = c;
    p.components.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        Expr acc = make_binary(BinOp::mul, make_constant(m.at(i, 0)), base.funcs[0]);
        for (std::size_t k = 1; k < base.size(); ++k)
            acc = make_binary(BinOp::add, acc,
                              make_binary(BinOp::mul, make_constant(m.at(i, k)), base.funcs[k]));
        p.components.push_back(std::move(acc));
    }
    return p;
}

PmResult pm_check(const PreconditionedSystem& sys, const Box& box, int n_cells,
                  DerivMode mode, Exec exec) {
    std::size_t n = box.size();
    PmResult r;
    r.faces.resize(n);

    auto run_face = [&](std::size_t i, Face::Side side) {
        Box face = face_of(box, i, side).box;
        // Cells inside a face are few; keep them serial and parallelize faces.
        return posneg(sys.components[i], face, n_cells, mode, Exec::serial);
    };

    if (exec == Exec::parallel) {
#ifdef MB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) collapse(2)
#endif
        for (long long i = 0; i < (long long)n; ++i)
            for (int side = 0; side < 2; ++side) {
                SignResult s = run_face((std::size_t)i,
                                        side == 0 ? Face::Side::low : Face::Side::high);
                if (side == 0)
                    r.faces[i].low = s;
                else
                    r.faces[i].high = s;
            }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            r.faces[i].low = run_face(i, Face::Side::low);
            r.faces[i].high = run_face(i, Face::Side::high);
        }
    }

    r.holds = true;
    for (const FaceSigns& f : r.faces)
        if (!f.opposite()) r.holds = false;
    return r;
}

std::vector<Box> refine_2n(const Box& box) {
    std::size_t n = box.size();
    if (n > 26) throw std::invalid_argument("refine_2n limited to 26 dimensions");
    std::vector<double> mid = box_center(box);
    std::vector<Box> out;
    out.reserve((std::size_t)1 << n);
    for (std::size_t idx = 0; idx < ((std::size_t)1 << n); ++idx) {
        std::vector<Interval> dims;
        dims.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            const Interval& d = box.dims[j];
            dims.push_back((idx >> j) & 1 ? Interval(mid[j], d.hi) : Interval(d.lo, mid[j]));
        }
        out.emplace_back(std::move(dims));
    }
    return out;
}

double residual_norm(std::span<const double> v, Norm norm) {
    double acc = 0.0;
    switch (norm) {
    case Norm::inf:
        for (double x : v) acc = std::max(acc, std::fabs(x));
        return acc;
    case Norm::one:
        for (double x : v) acc += std::fabs(x);
        return acc;
    case Norm::two:
        for (double x : v) acc += x * x;
        return std::sqrt(acc);
    }
    return acc;
}

SolveResult solve(const SystemDef& sys, const Box& k0, const SolverConfig& cfg) {
    if (k0.size() != sys.size())
        throw std::invalid_argument("initial box dimension does not match the system");
    if (cfg.delta <= 0.0 || cfg.subdivisions < 1 || cfg.max_consecutive_failures < 1)
        throw std::invalid_argument("invalid solver configuration");

    SolveResult result;
    PreconditionedSystem active = PreconditionedSystem::identity(sys);

    PmResult initial = pm_check(active, k0, cfg.subdivisions, cfg.derivative_mode, cfg.exec);
    if (!initial.holds) {
        result.status = SolveStatus::bad_initial_box;
        result.root = box_center(k0);
        result.residual = residual_norm(eval_system(sys, result.root), cfg.norm);
        return result;
    }

    Box box = k0;
    // Stall bookkeeping: the counter starts at 1 and gains one per scan pass
    // with no accepted subcube; it never goes back down, so the run ends once
    // max_consecutive_failures - 1 passes have failed anywhere in the run.
    int stop_counter = 1;
    for (int k = 1;; ++k) {
        IterationRecord rec;
        rec.k = k;
        rec.box = box;
        rec.center = box_center(box);
        rec.residual = residual_norm(eval_system(sys, rec.center), cfg.norm);

        if (rec.residual <= cfg.delta) {
            result.trace.records.push_back(std::move(rec));
            result.status = SolveStatus::converged;
            break;
        }
        if (k >= cfg.max_iterations) {
            result.trace.records.push_back(std::move(rec));
            result.status = SolveStatus::iteration_cap;
            break;
        }

        std::vector<Box> subcubes = refine_2n(box);
        bool accepted = false;
        bool stalled = false;
        while (!accepted) {
            rec.sign_results.clear();
            rec.sign_results.reserve(subcubes.size());
            int chosen = -1;
            for (std::size_t i = 0; i < subcubes.size(); ++i) {
                rec.sign_results.push_back(pm_check(active, subcubes[i], cfg.subdivisions,
                                                    cfg.derivative_mode, cfg.exec));
                if (chosen < 0 && rec.sign_results.back().holds) chosen = (int)i;
            }
            if (chosen >= 0) {
                rec.chosen_subcube = chosen;
                box = subcubes[(std::size_t)chosen];
                accepted = true;
            } else {
                ++stop_counter;
                if (stop_counter >= cfg.max_consecutive_failures) {
                    stalled = true;
                    break;
                }
                try {
                    active = precondition(active, rec.center);
                } catch (const SingularMatrixError&) {
                    stalled = true;
                    break;
                }
                rec.preconditioned = true;
                result.trace.precondition_events.push_back(
                    {k, rec.center, active.m, rec.box});
            }
        }
        result.trace.records.push_back(std::move(rec));
        if (stalled) {
            result.status = SolveStatus::stalled;
            break;
        }
    }

    const IterationRecord& last = result.trace.records.back();
    result.root = last.center;
    result.residual = last.residual;
    result.iterations = (int)result.trace.records.size();
    return result;
}

double error_bound(const Box& k0, int k) {
    double sum = 0.0;
    for (const Interval& d : k0.dims) sum += d.width();
    return std::ldexp(sum, -k);
}

int required_iterations(const Box& k0, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("tolerance must be positive");
    double sum = 0.0;
    for (const Interval& d : k0.dims) sum += d.width();
    if (sum <= delta) return 0;
    int k = (int)std::ceil(std::log2(sum / delta));
    // Integer fix-up against log rounding: smallest k with delta * 2^k >= sum.
    while (k > 0 && std::ldexp(delta, k - 1) >= sum) --k;
    while (std::ldexp(delta, k) < sum) ++k;
    return k;
}

} // namespace mb
