#pragma once

#include <random>
#include <vector>

#include "mb/expr.hpp"
#include "mb/solver.hpp"

namespace mbtest {

inline std::mt19937_64 make_rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline double uniform_in(std::mt19937_64& rng, const mb::Interval& iv) {
    std::uniform_real_distribution<double> d(iv.lo, iv.hi);
    return d(rng);
}

inline std::vector<double> sample_point(std::mt19937_64& rng, const mb::Box& box) {
    std::vector<double> p(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) p[i] = uniform_in(rng, box.dims[i]);
    return p;
}

inline mb::Box random_subbox(std::mt19937_64& rng, const mb::Box& outer) {
    std::vector<mb::Interval> dims;
    for (const mb::Interval& d : outer.dims) {
        double a = uniform_in(rng, d), b = uniform_in(rng, d);
        if (a > b) std::swap(a, b);
        dims.emplace_back(a, b);
    }
    return mb::Box(std::move(dims));
}

struct TestSystem {
    const char* name;
    mb::SystemDef sys;
    mb::Box k0;
};

// Benchmark systems used across the test suites: the closed-form map with a
// corner root plus the six harder maps, each with its reference box.
inline std::vector<TestSystem> testing_systems() {
    using mb::Box;
    using mb::Interval;
    std::vector<std::string> xy = {"x", "y"};
    std::vector<TestSystem> out;
    auto add = [&](const char* name, std::vector<std::string> funcs,
                   std::vector<std::vector<std::string>> jac, Box box) {
        out.push_back({name, mb::parse_system(xy, funcs, jac), std::move(box)});
    };
    add("example1", {"y + x - 1", "y - exp(-x^2)"}, {{"1", "1"}, {"2*x*exp(-x^2)", "1"}},
        Box({Interval(0, 1), Interval(0, 1)}));
    add("f1", {"x^2 + y^2 - 1", "x - y^2"}, {{"2*x", "2*y"}, {"1", "-2*y"}},
        Box({Interval(0, 1), Interval(0, 1)}));
    add("f2", {"2*x - y - exp(-x)", "-x + 2*y - exp(-y)"},
        {{"2 + exp(-x)", "-1"}, {"-1", "2 + exp(-y)"}}, Box({Interval(0, 1), Interval(0, 1)}));
    add("f3", {"sin(x) + cos(y) + 2*(x - 1)", "y - 0.5*(x - 0.5)^2 - 0.5"},
        {{"cos(x) + 2", "-sin(y)"}, {"-(x - 0.5)", "1"}},
        Box({Interval(0, 1), Interval(0, 1)}));
    add("f4", {"x^2 - cos(x*y)", "exp(x*y) + y"},
        {{"2*x + y*sin(x*y)", "x*sin(x*y)"}, {"y*exp(x*y)", "x*exp(x*y) + 1"}},
        Box({Interval(0, 1), Interval(-1, 0)}));
    add("f5", {"x*cos(y) + y*sin(x) - 0.5", "exp(-exp(-(x + y))) - y*(1 + x^2)"},
        {{"cos(y) + y*cos(x)", "-x*sin(y) + sin(x)"},
         {"exp(-exp(-(x + y)))*exp(-(x + y)) - 2*x*y",
          "exp(-exp(-(x + y)))*exp(-(x + y)) - (1 + x^2)"}},
        Box({Interval(0, 1.1), Interval(0, 2)}));
    add("f6", {"x + 5*(x - y)^3 - 1", "0.5*(y - x)^3 + y"},
        {{"1 + 15*(x - y)^2", "-15*(x - y)^2"}, {"-1.5*(y - x)^2", "1.5*(y - x)^2 + 1"}},
        Box({Interval(0.4, 1), Interval(0, 0.4)}));
    return out;
}

/// The six harder maps only (skips example1).
inline std::vector<TestSystem> hard_systems() {
    auto all = testing_systems();
    return {all.begin() + 1, all.end()};
}

} // namespace mbtest
