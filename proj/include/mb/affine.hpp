#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mb/interval.hpp"

namespace mb {

/// Affine form: center + sum of noise coefficients over symbols varying in
/// [-1, 1], plus a nonnegative residual treated as one always-fresh symbol.
///
/// Every form also carries the plain interval enclosure of the same
/// subexpression (`ia`), maintained op by op; extraction intersects the two.
/// Either bound alone is sound, and the interval side is what keeps bounds
/// exact where the affine linearization residual would push past them.
class AffineForm {
public:
    AffineForm() : ia_(0.0) {}

    static AffineForm constant(double v);

    /// Ad-hoc form; the interval side is seeded with center +- radius.
    AffineForm(double center, std::vector<std::pair<int, double>> noise, double residual);

    double center() const { return center_; }
    double residual() const { return residual_; }
    const std::vector<std::pair<int, double>>& noise() const { return noise_; }

    /// Sum of absolute coefficients plus residual, rounded up.
    double radius() const;

    friend AffineForm from_interval(const Interval& a, int fresh_symbol);
    friend Interval to_interval(const AffineForm& a);

    friend AffineForm operator-(const AffineForm& a);
    friend AffineForm operator+(const AffineForm& a, const AffineForm& b);
    friend AffineForm operator-(const AffineForm& a, const AffineForm& b);
    friend AffineForm operator*(const AffineForm& a, const AffineForm& b);
    friend AffineForm operator/(const AffineForm& a, const AffineForm& b);

    friend AffineForm exp(const AffineForm& a);
    friend AffineForm log(const AffineForm& a);
    friend AffineForm sqrt(const AffineForm& a);
    friend AffineForm sin(const AffineForm& a);
    friend AffineForm cos(const AffineForm& a);
    friend AffineForm abs(const AffineForm& a);
    friend AffineForm pow_int(const AffineForm& a, long long n);
    friend AffineForm pow_real(const AffineForm& a, double p);

    friend AffineForm detail_linearize(const AffineForm& a,
                                       const std::function<Interval(const Interval&)>& value_fn,
                                       const std::function<Interval(const Interval&)>& deriv_fn,
                                       const std::function<Interval(const Interval&)>& deriv2_fn);

private:
    double center_ = 0.0;
    std::vector<std::pair<int, double>> noise_; // sorted by symbol id
    double residual_ = 0.0;
    Interval ia_;
};

AffineForm from_interval(const Interval& a, int fresh_symbol);
Interval to_interval(const AffineForm& a);

AffineForm affine_arith(const AffineForm& a, const AffineForm& b, ArithOp op);
AffineForm affine_elementary(const AffineForm& a, ElemFn fn);

} // namespace mb
