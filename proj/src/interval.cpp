#include "mb/interval.hpp"

#include <algorithm>
#include <cstdio>

namespace mb {

namespace {

[[noreturn]] void domain_fail(const char* fn, const Interval& a, const char* why) {
    throw DomainError(std::string(fn) + " not defined on " + to_string(a) + ": " + why);
}

void require_finite(const char* fn, const Interval& a, double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)))
        domain_fail(fn, a, "result overflows the finite range");
}

// Endpoint values of monotone libm functions, widened one step unless the
// result is known exact (exp 0 = 1, log 1 = 0, sin 0 = 0, cos 0 = 1).
// Bounds are pinned at the functions' fixed points: exp(x) < 1 for x < 0 and
// > 1 for x > 0, so a nudge never crosses 1 (nor log's zero).  Certifying
// signs on faces that touch a root depends on these bounds being exact.
double exp_down(double x) {
    if (x == 0.0) return 1.0;
    double v = rnd::next_down(std::exp(x));
    if (x > 0.0) v = std::max(v, 1.0);
    return std::max(0.0, v);
}
double exp_up(double x) {
    if (x == 0.0) return 1.0;
    double v = rnd::next_up(std::exp(x));
    if (x < 0.0) v = std::min(v, 1.0);
    return v;
}
double log_down(double x) {
    if (x == 1.0) return 0.0;
    double v = rnd::next_down(std::log(x));
    if (x > 1.0) v = std::max(v, 0.0);
    return v;
}
double log_up(double x) {
    if (x == 1.0) return 0.0;
    double v = rnd::next_up(std::log(x));
    if (x < 1.0) v = std::min(v, 0.0);
    return v;
}

double sqrt_down(double x) {
    double s = std::sqrt(x);
    if (s * s == x && std::fma(s, s, -x) == 0.0) return s;
    return std::fma(s, s, -x) > 0.0 ? rnd::next_down(s) : s;
}
double sqrt_up(double x) {
    double s = std::sqrt(x);
    if (s * s == x && std::fma(s, s, -x) == 0.0) return s;
    return std::fma(s, s, -x) < 0.0 ? rnd::next_up(s) : s;
}

// pi widened one ulp each side of the rounded constant.
const double kPiLo = rnd::next_down(3.14159265358979323846);
const double kPiHi = rnd::next_up(3.14159265358979323846);

// x^n for x >= 0 with directed rounding, by square and multiply.
double pow_nonneg_down(double x, long long n) {
    double acc = 1.0, base = x;
    while (n > 0) {
        if (n & 1) acc = rnd::mul_down(acc, base);
        n >>= 1;
        if (n) base = rnd::mul_down(base, base);
    }
    return acc;
}
double pow_nonneg_up(double x, long long n) {
    double acc = 1.0, base = x;
    while (n > 0) {
        if (n & 1) acc = rnd::mul_up(acc, base);
        n >>= 1;
        if (n) base = rnd::mul_up(base, base);
    }
    return acc;
}

double pow_point_down(double x, long long n) { // n >= 1
    if (x >= 0.0) return pow_nonneg_down(x, n);
    double m = pow_nonneg_up(-x, n);
    return (n & 1) ? -m : pow_nonneg_down(-x, n);
}
double pow_point_up(double x, long long n) {
    if (x >= 0.0) return pow_nonneg_up(x, n);
    double m = pow_nonneg_down(-x, n);
    return (n & 1) ? -m : pow_nonneg_up(-x, n);
}

} // namespace

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero())
        throw DomainError("division by interval containing zero: " + to_string(b));
    double lo = std::min(std::min(rnd::div_down(a.lo, b.lo), rnd::div_down(a.lo, b.hi)),
                         std::min(rnd::div_down(a.hi, b.lo), rnd::div_down(a.hi, b.hi)));
    double hi = std::max(std::max(rnd::div_up(a.lo, b.lo), rnd::div_up(a.lo, b.hi)),
                         std::max(rnd::div_up(a.hi, b.lo), rnd::div_up(a.hi, b.hi)));
    return Interval(lo, hi);
}

Interval exp(const Interval& a) {
    double lo = exp_down(a.lo), hi = exp_up(a.hi);
    require_finite("exp", a, lo, hi);
    return Interval(lo, hi);
}

Interval log(const Interval& a) {
    if (a.lo <= 0.0) domain_fail("log", a, "requires a strictly positive interval");
    return Interval(log_down(a.lo), log_up(a.hi));
}

Interval sqrt(const Interval& a) {
    if (a.lo < 0.0) domain_fail("sqrt", a, "requires a nonnegative interval");
    return Interval(sqrt_down(a.lo), sqrt_up(a.hi));
}

namespace {

// True when q * pi may intersect [lo, hi], using the widened pi.
bool pi_multiple_inside(double q, double lo, double hi) {
    double clo = std::min(rnd::mul_down(q, kPiLo), rnd::mul_down(q, kPiHi));
    double chi = std::max(rnd::mul_up(q, kPiLo), rnd::mul_up(q, kPiHi));
    return chi >= lo && clo <= hi;
}

Interval trig_range(const Interval& a, bool is_sin) {
    // Beyond this magnitude the pi grid is no longer resolvable to within
    // one multiple; the full range is the only sound answer.
    if (a.width() >= 7.0 || std::fabs(a.lo) > 1e12 || std::fabs(a.hi) > 1e12)
        return Interval(-1.0, 1.0);

    auto value_at = [&](double x) { return is_sin ? std::sin(x) : std::cos(x); };
    auto exact_at = [&](double x) { return x == 0.0; };
    double vlo = value_at(a.lo), vhi = value_at(a.hi);
    double lo = std::min(exact_at(a.lo) ? vlo : rnd::next_down(vlo),
                         exact_at(a.hi) ? vhi : rnd::next_down(vhi));
    double hi = std::max(exact_at(a.lo) ? vlo : rnd::next_up(vlo),
                         exact_at(a.hi) ? vhi : rnd::next_up(vhi));

    // Critical points: sin is +-1 at (m + 1/2) pi, cos at m pi.
    double shift = is_sin ? 0.5 : 0.0;
    long long m_first = (long long)std::floor(a.lo / kPiLo) - 2;
    long long m_last = (long long)std::ceil(a.hi / kPiLo) + 2;
    for (long long m = m_first; m <= m_last; ++m) {
        double q = (double)m + shift;
        if (!pi_multiple_inside(q, a.lo, a.hi)) continue;
        if (m % 2 == 0)
            hi = 1.0;
        else
            lo = -1.0;
    }
    return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

} // namespace

Interval sin(const Interval& a) { return trig_range(a, true); }
Interval cos(const Interval& a) { return trig_range(a, false); }

Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return Interval(-a.hi, -a.lo);
    return Interval(0.0, std::max(-a.lo, a.hi));
}

Interval pow_int(const Interval& a, long long n) {
    if (n == 0) return Interval(1.0);
    if (n == 1) return a;
    if (n < 0) {
        if (a.contains_zero())
            domain_fail("pow_int", a, "negative power of an interval containing zero");
        return Interval(1.0) / pow_int(a, -n);
    }
    double lo, hi;
    if (n & 1) {
        lo = pow_point_down(a.lo, n);
        hi = pow_point_up(a.hi, n);
    } else if (a.lo >= 0.0) {
        lo = pow_nonneg_down(a.lo, n);
        hi = pow_nonneg_up(a.hi, n);
    } else if (a.hi <= 0.0) {
        lo = pow_nonneg_down(-a.hi, n);
        hi = pow_nonneg_up(-a.lo, n);
    } else {
        lo = 0.0;
        hi = pow_nonneg_up(std::max(-a.lo, a.hi), n);
    }
    require_finite("pow_int", a, lo, hi);
    return Interval(lo, hi);
}

Interval pow_real(const Interval& a, double p) {
    if (p == std::rint(p) && std::fabs(p) < 9.0e15)
        return pow_int(a, (long long)std::rint(p));
    if (a.lo < 0.0) domain_fail("pow_real", a, "non-integer power of a negative interval");
    if (a.lo == 0.0) {
        if (p < 0.0) domain_fail("pow_real", a, "negative power of an interval containing zero");
        if (a.hi == 0.0) return Interval(0.0);
        Interval upper = exp(Interval(p) * log(Interval(a.hi)));
        return Interval(0.0, upper.hi);
    }
    return exp(Interval(p) * log(a));
}

Interval elementary(const Interval& a, ElemFn fn) {
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

Interval intersect(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo, b.lo);
    double hi = std::min(a.hi, b.hi);
    if (lo > hi) return b.width() < a.width() ? b : a;
    return Interval(lo, hi);
}

std::string to_string(const Interval& a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo, a.hi);
    return buf;
}

} // namespace mb
