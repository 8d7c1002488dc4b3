#include "lacuna/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace lacuna {

namespace {

// Exact fractional part of a double; zero for values beyond 2^52.
double frac_exact(double v) { return v - std::floor(v); }

double wrap_unit(double r) {
    r -= std::floor(r);
    return r >= 1.0 ? 0.0 : r;
}

}  // namespace

double frac_dd(DoubleDouble v) {
    return wrap_unit(frac_exact(v.hi) + frac_exact(v.lo));
}

double frac_product(DoubleDouble f, double x) {
    const DoubleDouble a = two_prod(f.hi, x);
    const DoubleDouble b = two_prod(f.lo, x);
    double r = frac_exact(a.hi) + frac_exact(b.hi);
    r += a.lo + b.lo;
    return wrap_unit(r);
}

double frac_product(DoubleDouble f, DoubleDouble x) {
    const DoubleDouble a = two_prod(f.hi, x.hi);
    const DoubleDouble b = two_prod(f.hi, x.lo);
    const DoubleDouble c = two_prod(f.lo, x.hi);
    double r = frac_exact(a.hi) + frac_exact(b.hi) + frac_exact(c.hi);
    r += a.lo + b.lo + c.lo + f.lo * x.lo;
    return wrap_unit(r);
}

cplx expi_turns(double t) {
    const double y = 4.0 * t;
    const double q = std::nearbyint(y);
    const double f = y - q;
    const double angle = f * (kPi / 2.0);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double qm = q - 4.0 * std::floor(q / 4.0);
    switch (static_cast<int>(qm)) {
        case 0:
            return {c + 0.0, s + 0.0};
        case 1:
            return {-s + 0.0, c + 0.0};
        case 2:
            return {-c + 0.0, -s + 0.0};
        default:
            return {s + 0.0, -c + 0.0};
    }
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw FitError("fit_line: need at least two paired samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw FitError("fit_line: abscissae are all equal");
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        sse += r * r;
    }
    out.std_error = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
    out.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return out;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace lacuna
