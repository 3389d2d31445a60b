#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mb {

/// Thrown when an operand leaves the mathematical domain of an operation
/// (division through zero, log of a nonpositive interval, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace rnd {

inline double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
inline double next_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

// TwoSum error term: a + b == s + err exactly, for any finite a, b.
inline double sum_err(double a, double b, double s) {
    double bv = s - a;
    double av = s - bv;
    return (b - bv) + (a - av);
}

// Directed rounding that leaves exact results untouched.  Nudging
// unconditionally would destroy the exact zero bounds the face-sign
// certification depends on.
inline double add_down(double a, double b) {
    double s = a + b;
    return sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}
inline double add_up(double a, double b) {
    double s = a + b;
    return sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// The FMA residual of a product is exact only away from the subnormal range.
inline bool residual_exact(double p) {
    return std::isfinite(p) && std::fabs(p) >= 0x1p-1021;
}

inline double mul_down(double a, double b) {
    double p = a * b;
    if (p == 0.0 && (a == 0.0 || b == 0.0)) return 0.0;
    if (!residual_exact(p)) return next_down(p);
    return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}
inline double mul_up(double a, double b) {
    double p = a * b;
    if (p == 0.0 && (a == 0.0 || b == 0.0)) return 0.0;
    if (!residual_exact(p)) return next_up(p);
    return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}
inline double div_down(double a, double b) {
    double q = a / b;
    if (q == 0.0 && a == 0.0) return 0.0;
    if (!residual_exact(q)) return next_down(q);
    double r = std::fma(q, b, -a); // q*b - a, exact; true quotient - q = -r/b
    if (r == 0.0) return q;
    return ((r > 0.0) == (b > 0.0)) ? next_down(q) : q;
}
inline double div_up(double a, double b) {
    double q = a / b;
    if (q == 0.0 && a == 0.0) return 0.0;
    if (!residual_exact(q)) return next_up(q);
    double r = std::fma(q, b, -a);
    if (r == 0.0) return q;
    return ((r < 0.0) == (b > 0.0)) ? next_up(q) : q;
}

} // namespace rnd

/// Closed interval [lo, hi] with finite endpoints.  All operations round
/// outward, so the result encloses every pointwise real result.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double v) : Interval(v, v) {}
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(std::isfinite(l) && std::isfinite(h)) || l > h)
            throw std::invalid_argument("interval endpoints must be finite with lo <= hi");
    }

    double width() const { return hi - lo; }
    double mid() const { return (lo + hi) / 2.0; }
    double rad() const { return rnd::mul_up(0.5, rnd::sub_up(hi, lo)); }
    bool degenerate() const { return lo == hi; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
};

inline bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
}

inline Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval(rnd::add_down(a.lo, b.lo), rnd::add_up(a.hi, b.hi));
}
inline Interval operator-(const Interval& a, const Interval& b) {
    return Interval(rnd::sub_down(a.lo, b.hi), rnd::sub_up(a.hi, b.lo));
}
inline Interval operator*(const Interval& a, const Interval& b) {
    double lo = std::min(std::min(rnd::mul_down(a.lo, b.lo), rnd::mul_down(a.lo, b.hi)),
                         std::min(rnd::mul_down(a.hi, b.lo), rnd::mul_down(a.hi, b.hi)));
    double hi = std::max(std::max(rnd::mul_up(a.lo, b.lo), rnd::mul_up(a.lo, b.hi)),
                         std::max(rnd::mul_up(a.hi, b.lo), rnd::mul_up(a.hi, b.hi)));
    return Interval(lo, hi);
}
Interval operator/(const Interval& a, const Interval& b);

enum class ArithOp { add, sub, mul, div };

inline Interval arith(const Interval& a, const Interval& b, ArithOp op) {
    switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
    }
    throw std::logic_error("bad ArithOp");
}

Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sqrt(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval abs(const Interval& a);
Interval pow_int(const Interval& a, long long n);
Interval pow_real(const Interval& a, double p);

enum class ElemFn { exp, log, sqrt, sin, cos, abs };

Interval elementary(const Interval& a, ElemFn fn);

/// Intersection; both arguments must enclose the same true set, so an empty
/// result signals a bug and the tighter-compatible hull is returned instead.
Interval intersect(const Interval& a, const Interval& b);

std::string to_string(const Interval& a);

} // namespace mb
