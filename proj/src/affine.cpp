#include "mb/affine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mb {

namespace {

using rnd::add_up;
using rnd::mul_up;
using rnd::sub_up;

// Magnitude of the rounding error of fl(x*y) = p; exact via FMA when the
// residual is representable, conservative otherwise.
double prod_err(double x, double y, double p) {
    if (p == 0.0 && (x == 0.0 || y == 0.0)) return 0.0;
    if (rnd::residual_exact(p)) return std::fabs(std::fma(x, y, -p));
    return 0x1p-1074 + std::fabs(p) * 0x1p-52;
}

double sum_err_abs(double x, double y, double s) { return std::fabs(rnd::sum_err(x, y, s)); }

} // namespace

AffineForm AffineForm::constant(double v) {
    AffineForm f;
    f.center_ = v;
    f.ia_ = Interval(v);
    return f;
}

AffineForm::AffineForm(double center, std::vector<std::pair<int, double>> noise, double residual)
    : center_(center), noise_(std::move(noise)), residual_(residual), ia_(0.0) {
    if (residual_ < 0.0) throw std::invalid_argument("affine residual must be nonnegative");
    std::sort(noise_.begin(), noise_.end());
    double r = radius();
    ia_ = Interval(rnd::sub_down(center_, r), add_up(center_, r));
}

double AffineForm::radius() const {
    double r = residual_;
    for (const auto& [id, c] : noise_) r = add_up(r, std::fabs(c));
    return r;
}

AffineForm from_interval(const Interval& a, int fresh_symbol) {
    AffineForm f;
    f.center_ = a.mid();
    double r = std::max(sub_up(f.center_, a.lo), sub_up(a.hi, f.center_));
    if (r > 0.0) f.noise_.emplace_back(fresh_symbol, r);
    f.ia_ = a;
    return f;
}

Interval to_interval(const AffineForm& a) {
    double r = a.radius();
    Interval centered(rnd::sub_down(a.center_, r), add_up(a.center_, r));
    return intersect(centered, a.ia_);
}

AffineForm operator-(const AffineForm& a) {
    AffineForm r = a;
    r.center_ = -r.center_;
    for (auto& [id, c] : r.noise_) c = -c;
    r.ia_ = -a.ia_;
    return r;
}

AffineForm operator+(const AffineForm& a, const AffineForm& b) {
    AffineForm r;
    r.center_ = a.center_ + b.center_;
    double slack = sum_err_abs(a.center_, b.center_, r.center_);
    r.noise_.reserve(a.noise_.size() + b.noise_.size());
    std::size_t i = 0, j = 0;
    while (i < a.noise_.size() || j < b.noise_.size()) {
        if (j == b.noise_.size() || (i < a.noise_.size() && a.noise_[i].first < b.noise_[j].first)) {
            r.noise_.push_back(a.noise_[i++]);
        } else if (i == a.noise_.size() || b.noise_[j].first < a.noise_[i].first) {
            r.noise_.push_back(b.noise_[j++]);
        } else {
            double c = a.noise_[i].second + b.noise_[j].second;
            slack = add_up(slack, sum_err_abs(a.noise_[i].second, b.noise_[j].second, c));
            if (c != 0.0) r.noise_.emplace_back(a.noise_[i].first, c);
            ++i, ++j;
        }
    }
    r.residual_ = add_up(add_up(a.residual_, b.residual_), slack);
    r.ia_ = a.ia_ + b.ia_;
    return r;
}

AffineForm operator-(const AffineForm& a, const AffineForm& b) { return a + (-b); }

AffineForm operator*(const AffineForm& a, const AffineForm& b) {
    AffineForm r;
    r.center_ = a.center_ * b.center_;
    double slack = prod_err(a.center_, b.center_, r.center_);

    double rad_a = a.residual_, rad_b = b.residual_;
    for (const auto& [id, c] : a.noise_) rad_a = add_up(rad_a, std::fabs(c));
    for (const auto& [id, c] : b.noise_) rad_b = add_up(rad_b, std::fabs(c));

    std::size_t i = 0, j = 0;
    while (i < a.noise_.size() || j < b.noise_.size()) {
        int id;
        double ai = 0.0, bi = 0.0;
        bool take_a = i < a.noise_.size() &&
                      (j == b.noise_.size() || a.noise_[i].first <= b.noise_[j].first);
        bool take_b = j < b.noise_.size() &&
                      (i == a.noise_.size() || b.noise_[j].first <= a.noise_[i].first);
        if (take_a && take_b) {
            id = a.noise_[i].first;
            ai = a.noise_[i++].second;
            bi = b.noise_[j++].second;
        } else if (take_a) {
            id = a.noise_[i].first;
            ai = a.noise_[i++].second;
        } else {
            id = b.noise_[j].first;
            bi = b.noise_[j++].second;
        }
        double t1 = a.center_ * bi;
        double t2 = b.center_ * ai;
        double c = t1 + t2;
        slack = add_up(slack, prod_err(a.center_, bi, t1));
        slack = add_up(slack, prod_err(b.center_, ai, t2));
        slack = add_up(slack, sum_err_abs(t1, t2, c));
        if (c != 0.0) r.noise_.emplace_back(id, c);
    }

    double res = add_up(mul_up(std::fabs(a.center_), b.residual_),
                        mul_up(std::fabs(b.center_), a.residual_));
    res = add_up(res, mul_up(rad_a, rad_b));
    r.residual_ = add_up(res, slack);
    r.ia_ = a.ia_ * b.ia_;
    return r;
}

// Linearization of fn over the form's current range W = [a, b].
//
// When fn has one-signed curvature on W the slope is the secant and the
// offset window combines the rigorous tangent bound at the midpoint with the
// endpoint values (Chebyshev-quality error, |f''| r^2 / 2).  Otherwise a
// min-range slope from the derivative enclosure is used, and slope zero (the
// plain interval range) when even that is unavailable.  Every offset is
// interval-computed, so any slope yields a sound form.
AffineForm detail_linearize(const AffineForm& a,
                            const std::function<Interval(const Interval&)>& value_fn,
                            const std::function<Interval(const Interval&)>& deriv_fn,
                            const std::function<Interval(const Interval&)>& deriv2_fn) {
    // alpha * form + (zeta +- delta), with the interval side replaced by `values`.
    auto apply_line = [](const AffineForm& src, double alpha, const Interval& h,
                         const Interval& values) {
        AffineForm r;
        double zeta = h.mid();
        double delta = std::max(sub_up(h.hi, zeta), sub_up(zeta, h.lo));

        double slack = 0.0;
        r.center_ = alpha * src.center_;
        slack = add_up(slack, prod_err(alpha, src.center_, r.center_));
        double c0 = r.center_ + zeta;
        slack = add_up(slack, sum_err_abs(r.center_, zeta, c0));
        r.center_ = c0;
        r.noise_.reserve(src.noise_.size());
        for (const auto& [id, c] : src.noise_) {
            double sc = alpha * c;
            slack = add_up(slack, prod_err(alpha, c, sc));
            if (sc != 0.0) r.noise_.emplace_back(id, sc);
        }
        r.residual_ = add_up(add_up(mul_up(std::fabs(alpha), src.residual_), delta), slack);
        r.ia_ = values;
        return r;
    };
    auto range_only = [](const Interval& values) {
        AffineForm r;
        r.center_ = values.mid();
        r.residual_ = std::max(sub_up(values.hi, r.center_), sub_up(r.center_, values.lo));
        r.ia_ = values;
        return r;
    };

    Interval w = to_interval(a);
    Interval values = value_fn(w); // also performs the domain check
    if (w.degenerate()) return range_only(values);

    bool convex = false, concave = false;
    if (deriv2_fn) {
        try {
            Interval d2 = deriv2_fn(w);
            convex = d2.lo >= 0.0;
            concave = d2.hi <= 0.0;
        } catch (const DomainError&) {
        }
    }
    if (convex || concave) {
        Interval fa = value_fn(Interval(w.lo));
        Interval fb = value_fn(Interval(w.hi));
        double alpha = (fb.mid() - fa.mid()) / (w.hi - w.lo);
        if (std::isfinite(alpha)) {
            try {
                Interval ia(alpha);
                Interval ga = fa - ia * Interval(w.lo);
                Interval gb = fb - ia * Interval(w.hi);
                double m = w.mid();
                Interval gm = value_fn(Interval(m)) - ia * Interval(m);
                Interval tangent = gm + (deriv_fn(Interval(m)) - ia) * (w - Interval(m));
                Interval h = convex ? Interval(std::min(tangent.lo, std::min(ga.lo, gb.lo)),
                                               std::max(ga.hi, gb.hi))
                                    : Interval(std::min(ga.lo, gb.lo),
                                               std::max(tangent.hi, std::max(ga.hi, gb.hi)));
                return apply_line(a, alpha, h, values);
            } catch (const DomainError&) {
            }
        }
    }

    double alpha = 0.0;
    try {
        Interval d = deriv_fn(w);
        if (d.lo >= 0.0)
            alpha = d.lo;
        else if (d.hi <= 0.0)
            alpha = d.hi;
    } catch (const DomainError&) {
        alpha = 0.0;
    }
    if (alpha != 0.0) {
        Interval ia(alpha);
        Interval h = hull(value_fn(Interval(w.lo)) - ia * Interval(w.lo),
                          value_fn(Interval(w.hi)) - ia * Interval(w.hi));
        return apply_line(a, alpha, h, values);
    }
    return range_only(values);
}

AffineForm operator/(const AffineForm& a, const AffineForm& b) {
    AffineForm recip = detail_linearize(
        b, [](const Interval& x) { return Interval(1.0) / x; },
        [](const Interval& x) { return -pow_int(x, -2); },
        [](const Interval& x) { return Interval(2.0) * pow_int(x, -3); });
    return a * recip;
}

AffineForm exp(const AffineForm& a) {
    auto f = [](const Interval& x) { return exp(x); };
    return detail_linearize(a, f, f, f);
}

AffineForm log(const AffineForm& a) {
    return detail_linearize(
        a, [](const Interval& x) { return log(x); },
        [](const Interval& x) { return pow_int(x, -1); },
        [](const Interval& x) { return -pow_int(x, -2); });
}

AffineForm sqrt(const AffineForm& a) {
    return detail_linearize(
        a, [](const Interval& x) { return sqrt(x); },
        [](const Interval& x) { return Interval(0.5) / sqrt(x); },
        [](const Interval& x) { return Interval(-0.25) * pow_real(x, -1.5); });
}

AffineForm sin(const AffineForm& a) {
    return detail_linearize(
        a, [](const Interval& x) { return sin(x); }, [](const Interval& x) { return cos(x); },
        [](const Interval& x) { return -sin(x); });
}

AffineForm cos(const AffineForm& a) {
    return detail_linearize(
        a, [](const Interval& x) { return cos(x); }, [](const Interval& x) { return -sin(x); },
        [](const Interval& x) { return -cos(x); });
}

AffineForm abs(const AffineForm& a) {
    Interval w = to_interval(a);
    if (w.lo >= 0.0) return a;
    if (w.hi <= 0.0) return -a;
    return detail_linearize(
        a, [](const Interval& x) { return abs(x); },
        [](const Interval&) { return Interval(-1.0, 1.0); }, nullptr);
}

AffineForm pow_int(const AffineForm& a, long long n) {
    if (n == 0) return AffineForm::constant(1.0);
    if (n == 1) return a;
    return detail_linearize(
        a, [n](const Interval& x) { return pow_int(x, n); },
        [n](const Interval& x) { return Interval((double)n) * pow_int(x, n - 1); },
        [n](const Interval& x) {
            return Interval((double)n) * Interval((double)(n - 1)) * pow_int(x, n - 2);
        });
}

AffineForm pow_real(const AffineForm& a, double p) {
    if (p == std::rint(p) && std::fabs(p) < 9.0e15) return pow_int(a, (long long)std::rint(p));
    return detail_linearize(
        a, [p](const Interval& x) { return pow_real(x, p); },
        [p](const Interval& x) { return Interval(p) * pow_real(x, p - 1.0); },
        [p](const Interval& x) { return Interval(p) * Interval(p - 1.0) * pow_real(x, p - 2.0); });
}

AffineForm affine_arith(const AffineForm& a, const AffineForm& b, ArithOp op) {
    switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
    }
    throw std::logic_error("bad ArithOp");
}

AffineForm affine_elementary(const AffineForm& a, ElemFn fn) {
    switch (fn) {
    case ElemFn::exp: return exp(a);
    case ElemFn::log: return log(a);
    case ElemFn::sqrt: return sqrt(a);
    case ElemFn::sin: return sin(a);
    case ElemFn::cos: return cos(a);
    case ElemFn::abs: return abs(a);
    }
    throw std::logic_error("bad ElemFn");
}

} // namespace mb
