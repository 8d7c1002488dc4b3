#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

namespace lacuna {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct EmptyBlockError : Error {
    using Error::Error;
};
struct NotCoveredError : Error {
    using Error::Error;
};
struct TruncationError : Error {
    using Error::Error;
};
struct FitError : Error {
    using Error::Error;
};

// Neumaier compensated accumulator.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexSum {
public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    NeumaierSum re_, im_;
};

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return two_sum(s.hi, s.lo);
}

inline DoubleDouble dd_mul(DoubleDouble a, double b) {
    DoubleDouble p = two_prod(a.hi, b);
    p.lo = std::fma(a.lo, b, p.lo);
    return two_sum(p.hi, p.lo);
}

inline DoubleDouble dd_mul(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

inline DoubleDouble dd_from_long_double(long double v) {
    const double hi = static_cast<double>(v);
    return {hi, static_cast<double>(v - static_cast<long double>(hi))};
}

inline const DoubleDouble kTwoPiDD{6.283185307179586, 2.4492935982947064e-16};

// Fractional part in [0,1) of an unevaluated sum.
double frac_dd(DoubleDouble v);

// frac(f * x) with f carried in double-double; exact for integral f and dyadic x.
double frac_product(DoubleDouble f, double x);
double frac_product(DoubleDouble f, DoubleDouble x);

// (cos 2πt, sin 2πt) after reduction to quarter turns; exact at multiples of 1/4.
cplx expi_turns(double t);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double std_error = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares; requires at least two distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view s);

}  // namespace lacuna
