#include "lacuna/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lacuna {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double frac(double t) {
    const double f = t - std::floor(t);
    return f >= 1.0 ? 0.0 : f;
}

}  // namespace

BasisInfo basis_info(const BasisFunction& b) {
    return std::visit(
        overloaded{
            [](const ExpBasis&) {
                return BasisInfo{"exp", 1.0, LipschitzBounds{kTwoPi, 0.5}, kTwoPi, 2, false, true};
            },
            [](const OneMinusExpBasis&) {
                return BasisInfo{"one_minus_exp", 2.0, LipschitzBounds{kTwoPi, 0.5}, kTwoPi, 2, false, true};
            },
            [](const ExpDiffBasis& e) {
                const double lip = kTwoPi * (1.0 + std::pow(e.lambda, 1.0 - e.beta));
                return BasisInfo{"exp_diff", 1.0 + std::pow(e.lambda, -e.beta), std::nullopt, lip, 2, false,
                                 e.lambda == std::floor(e.lambda)};
            },
            [](const TakagiSineBasis&) {
                return BasisInfo{"takagi_sine", std::sqrt(1.25), LipschitzBounds{kTakagiLipschitz, 0.25},
                                 std::sqrt(1.0 + kTwoPi * kTwoPi), 2, false, true};
            },
            [](const SineRealBasis&) {
                return BasisInfo{"sine_real", 1.0, std::nullopt, kTwoPi, 1, true, true};
            },
        },
        b);
}

void validate(const BasisFunction& b) {
    if (const auto* e = std::get_if<ExpDiffBasis>(&b)) {
        if (!(e->beta > 0.0) || !(e->lambda > 1.0) || !std::isfinite(e->beta) || !std::isfinite(e->lambda))
            throw ValidationError("exp_diff basis needs beta > 0 and lambda > 1");
    }
}

cplx eval_basis_reduced(const BasisFunction& b, double ft, double flt) {
    return std::visit(overloaded{
                          [&](const ExpBasis&) { return expi_turns(ft); },
                          [&](const OneMinusExpBasis&) {
                              const double s = expi_turns(0.5 * ft).imag();
                              return cplx{2.0 * s * s + 0.0, -expi_turns(ft).imag() + 0.0};
                          },
                          [&](const ExpDiffBasis& e) {
                              return expi_turns(ft) - std::pow(e.lambda, -e.beta) * expi_turns(flt);
                          },
                          [&](const TakagiSineBasis&) {
                              return cplx{std::min(ft, 1.0 - ft), expi_turns(ft).imag()};
                          },
                          [&](const SineRealBasis&) { return cplx{expi_turns(ft).imag(), 0.0}; },
                      },
                      b);
}

cplx eval_basis(const BasisFunction& b, double t) {
    double flt = 0.0;
    if (const auto* e = std::get_if<ExpDiffBasis>(&b)) flt = frac_product(DoubleDouble{e->lambda, 0.0}, t);
    return eval_basis_reduced(b, frac(t), flt);
}

ProbeResult bilipschitz_probe(const BasisFunction& b, double delta, std::uint64_t samples, std::uint64_t seed) {
    if (!(delta > 0.0)) throw ValidationError("bilipschitz_probe needs delta > 0");
    if (samples < 1) throw ValidationError("bilipschitz_probe needs samples >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ProbeResult out{std::numeric_limits<double>::infinity(), 0.0, 0};
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double x = unit(rng);
        const double h = delta * (1.0 - unit(rng));
        const double y = x + (unit(rng) < 0.5 ? h : -h);
        const double d = std::fabs(x - y);
        if (!(d > 0.0)) continue;
        const double r = std::abs(eval_basis(b, x) - eval_basis(b, y)) / d;
        out.lower = std::min(out.lower, r);
        out.upper = std::max(out.upper, r);
        ++out.pairs;
    }
    if (out.pairs == 0) out.lower = 0.0;
    return out;
}

}  // namespace lacuna
