#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "mb/box.hpp"
#include "mb/interval.hpp"

using namespace mb;

namespace {

// Independent oracle: min/max over all endpoint combinations.
Interval endpoint_oracle(const Interval& a, const Interval& b, ArithOp op) {
    auto apply = [&](double x, double y) {
        switch (op) {
        case ArithOp::add: return x + y;
        case ArithOp::sub: return x - y;
        case ArithOp::mul: return x * y;
        case ArithOp::div: return x / y;
        }
        return 0.0;
    };
    double vals[4] = {apply(a.lo, b.lo), apply(a.lo, b.hi), apply(a.hi, b.lo),
                      apply(a.hi, b.hi)};
    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return Interval(lo, hi);
}

// Independent oracle: dense sampling of a univariate function.
Interval sampling_oracle(const Interval& a, double (*f)(double), int n = 20000) {
    double lo = f(a.lo), hi = f(a.lo);
    for (int i = 1; i <= n; ++i) {
        double x = a.lo + (a.hi - a.lo) * i / n;
        double v = f(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return Interval(lo, hi);
}

} // namespace

TEST_CASE("interval invariants on construction") {
    CHECK_THROWS_AS(Interval(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK(Interval(2.0).degenerate());
}

TEST_CASE("arithmetic endpoint cases") {
    Interval r = Interval(1, 2) + Interval(3, 4);
    CHECK(r.lo == 4.0);
    CHECK(r.hi == 6.0);

    // all four endpoint products, min/max
    Interval m = Interval(-1, 2) * Interval(3, 4);
    Interval oracle = endpoint_oracle(Interval(-1, 2), Interval(3, 4), ArithOp::mul);
    CHECK(m.lo == oracle.lo);
    CHECK(m.hi == oracle.hi);
    CHECK(m.lo == -4.0);
    CHECK(m.hi == 8.0);

    // dependency-free subtraction widens
    Interval s = Interval(1, 2) - Interval(1, 2);
    CHECK(s.lo == -1.0);
    CHECK(s.hi == 1.0);

    CHECK_THROWS_AS(Interval(1, 2) / Interval(-1, 1), DomainError);
}

TEST_CASE("exact dyadic operations stay exact") {
    Interval r = Interval(0.25, 0.5) + Interval(0.25, 0.25);
    CHECK(r.lo == 0.5);
    CHECK(r.hi == 0.75);
    Interval m = Interval(0.5, 1.0) * Interval(2.0, 2.0);
    CHECK(m.lo == 1.0);
    CHECK(m.hi == 2.0);
    // 1 - exp(0) has an exact zero bound; face certification relies on it.
    Interval e = Interval(1.0) - exp(Interval(-1.0, 0.0));
    CHECK(e.lo == 0.0);
}

TEST_CASE("elementary functions") {
    Interval e = exp(Interval(0, 1));
    CHECK(e.lo == 1.0);
    CHECK(e.hi == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(e.hi >= std::exp(1.0));

    Interval s = sin(Interval(0.0, 3.14159265358979323846));
    Interval s_oracle = sampling_oracle(Interval(0.0, 3.14159265358979323846), std::sin);
    CHECK(s.lo <= s_oracle.lo);
    CHECK(s.hi >= s_oracle.hi);
    CHECK(s.hi == 1.0); // critical point pi/2 inside
    CHECK(s.lo == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.lo <= 0.0);

    Interval p = pow_int(Interval(-1, 2), 2);
    Interval p_oracle = sampling_oracle(Interval(-1, 2), [](double x) { return x * x; });
    CHECK(p.lo <= p_oracle.lo);
    CHECK(p.hi >= p_oracle.hi);
    CHECK(p.lo == 0.0);
    CHECK(p.hi == 4.0);

    CHECK_THROWS_AS(log(Interval(-1, 1)), DomainError);
    CHECK_THROWS_AS(sqrt(Interval(-2, -1)), DomainError);
    CHECK_THROWS_AS(pow_real(Interval(-1, 1), 0.5), DomainError);
    CHECK(abs(Interval(-3, 2)) == Interval(0, 3));
    CHECK(pow_int(Interval(2, 3), -1) == Interval(1, 1) / Interval(2, 3));

    // errors name the function and the offending interval
    try {
        log(Interval(-1, 1));
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        std::string msg = e.what();
        CHECK(msg.find("log") != std::string::npos);
        CHECK(msg.find("[-1, 1]") != std::string::npos);
    }
    CHECK_THROWS_AS(exp(Interval(700, 1000)), DomainError);
    CHECK_THROWS_AS(uniform_subdivide(Interval(0, 1), 0), std::invalid_argument);
    CHECK_THROWS_AS(Box(std::vector<Interval>{}), std::invalid_argument);
}

TEST_CASE("pow_real through exp-log composition") {
    Interval r = pow_real(Interval(1, 4), 0.5);
    CHECK(r.lo <= 1.0);
    CHECK(r.hi >= 2.0);
    CHECK(r.hi < 2.0 + 1e-12);
    Interval z = pow_real(Interval(0, 4), 1.5);
    CHECK(z.lo == 0.0);
    CHECK(z.hi >= 8.0);
}

TEST_CASE("elementary containment sweep") {
    auto rng = mbtest::make_rng(301);
    std::uniform_real_distribution<double> endpoints(-6.0, 6.0);
    double (*scalars[6])(double) = {std::exp, std::log, std::sqrt, std::sin, std::cos,
                                    std::fabs};
    ElemFn fns[6] = {ElemFn::exp, ElemFn::log, ElemFn::sqrt, ElemFn::sin, ElemFn::cos,
                     ElemFn::abs};
    for (int trial = 0; trial < 400; ++trial) {
        double a = endpoints(rng), b = endpoints(rng);
        if (a > b) std::swap(a, b);
        Interval iv(a, b);
        for (int i = 0; i < 6; ++i) {
            if (fns[i] == ElemFn::log && iv.lo <= 0.0) continue;
            if (fns[i] == ElemFn::sqrt && iv.lo < 0.0) continue;
            Interval r = elementary(iv, fns[i]);
            for (int s = 0; s < 64; ++s) {
                double x = mbtest::uniform_in(rng, iv);
                REQUIRE(r.contains(scalars[i](x)));
            }
        }
    }
}

TEST_CASE("trig full-range guards") {
    CHECK(sin(Interval(0, 100)) == Interval(-1, 1));
    CHECK(cos(Interval(-50, 50)) == Interval(-1, 1));
    Interval far = cos(Interval(1e13, 1e13 + 1));
    CHECK(far == Interval(-1, 1));
    Interval narrow = cos(Interval(-0.25, 0.25));
    CHECK(narrow.hi == 1.0);
    CHECK(narrow.lo <= std::cos(0.25));
    CHECK(narrow.lo >= std::cos(0.25) - 1e-12);
}

TEST_CASE("containment under random sampling") {
    auto rng = mbtest::make_rng(2024);
    std::uniform_real_distribution<double> endpoints(-10.0, 10.0);
    ArithOp ops[4] = {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div};
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double a1 = endpoints(rng), a2 = endpoints(rng);
        double b1 = endpoints(rng), b2 = endpoints(rng);
        Interval a(std::min(a1, a2), std::max(a1, a2));
        Interval b(std::min(b1, b2), std::max(b1, b2));
        for (ArithOp op : ops) {
            if (op == ArithOp::div && b.contains_zero()) continue;
            Interval r = arith(a, b, op);
            for (int s = 0; s < 100; ++s) {
                double x = mbtest::uniform_in(rng, a);
                double y = mbtest::uniform_in(rng, b);
                double v = op == ArithOp::add   ? x + y
                           : op == ArithOp::sub ? x - y
                           : op == ArithOp::mul ? x * y
                                                : x / y;
                REQUIRE(r.contains(v));
                ++checked;
            }
        }
    }
    CHECK(checked > 100000);
}

TEST_CASE("inclusion isotonicity") {
    auto rng = mbtest::make_rng(7);
    std::uniform_real_distribution<double> endpoints(-5.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        double pts[4];
        for (double& p : pts) p = endpoints(rng);
        std::sort(pts, pts + 4);
        Interval inner(pts[1], pts[2]), outer(pts[0], pts[3]);
        Interval b(0.5, 2.5), bigger(0.25, 3.0);
        for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div}) {
            Interval small = arith(inner, b, op);
            Interval large = arith(outer, bigger, op);
            REQUIRE(large.contains(small));
        }
    }
}

TEST_CASE("degenerate intervals track scalar arithmetic within 2 ulps") {
    auto rng = mbtest::make_rng(99);
    std::uniform_real_distribution<double> vals(-100.0, 100.0);
    for (int trial = 0; trial < 2000; ++trial) {
        double x = vals(rng), y = vals(rng);
        if (y == 0.0) continue;
        for (ArithOp op : {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div}) {
            Interval r = arith(Interval(x), Interval(y), op);
            double v = op == ArithOp::add   ? x + y
                       : op == ArithOp::sub ? x - y
                       : op == ArithOp::mul ? x * y
                                            : x / y;
            REQUIRE(r.contains(v));
            REQUIRE(r.hi - r.lo <= 2.0 * std::fabs(v) * 0x1p-52 + 0x1p-1070);
        }
    }
}

TEST_CASE("uniform_subdivide covers the input exactly") {
    auto cells1 = uniform_subdivide(Interval(0, 1), 1);
    REQUIRE(cells1.size() == 1);
    CHECK(cells1[0] == Interval(0, 1));

    auto cells2 = uniform_subdivide(Interval(0, 1), 2);
    REQUIRE(cells2.size() == 2);
    CHECK(cells2[0] == Interval(0, 0.5));
    CHECK(cells2[1] == Interval(0.5, 1));

    // union equals the input exactly even when the step is not representable
    auto rng = mbtest::make_rng(11);
    std::uniform_real_distribution<double> endpoints(-20.0, 20.0);
    for (int trial = 0; trial < 300; ++trial) {
        double a = endpoints(rng), b = endpoints(rng);
        if (a > b) std::swap(a, b);
        for (int n : {1, 2, 3, 5, 7}) {
            auto cells = uniform_subdivide(Interval(a, b), n);
            REQUIRE((int)cells.size() == (a == b ? 1 : n));
            Interval h = cells[0];
            for (std::size_t i = 1; i < cells.size(); ++i) {
                REQUIRE(cells[i].lo == cells[i - 1].hi);
                h = hull(h, cells[i]);
            }
            REQUIRE(h == Interval(a, b));
        }
    }
}

TEST_CASE("box center and width") {
    Box b({Interval(0, 1), Interval(0, 1)});
    auto c = box_center(b);
    CHECK(c[0] == 0.5);
    CHECK(c[1] == 0.5);

    Box deg({Interval(3, 3), Interval(-2, -2)});
    auto cd = box_center(deg);
    CHECK(cd[0] == 3.0);
    CHECK(cd[1] == -2.0);

    Box mixed({Interval(0, 1), Interval(0.5, 1)});
    auto cm = box_center(mixed);
    CHECK(cm[0] == 0.5);
    CHECK(cm[1] == 0.75);
    CHECK(mixed.width() == 1.0);
}
