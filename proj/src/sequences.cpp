#include "lacuna/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lacuna/numeric.hpp"

namespace lacuna {

namespace {

constexpr long double kSnap = 1e-12L;
constexpr std::int64_t kDirectBlockLimit = std::int64_t{1} << 22;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool snapped_at_least(long double value, long double target) { return value >= target * (1.0L - kSnap); }

long double snap(long double t) {
    const long double r = std::nearbyint(t);
    return std::fabs(t - r) <= kSnap * std::max(1.0L, std::fabs(t)) ? r : t;
}

// Block index k with q^k <= λ < q^{k+1}, tolerant to round-off at the edges.
int block_of(long double lambda, double q) {
    return static_cast<int>(std::floor(snap(std::log(lambda) / std::log(static_cast<long double>(q)))));
}

double per_block_coefficient(const PerBlockGeometricCoefficients& c, const FrequencyRule& freqs, std::int64_t n) {
    const int k = block_of(lambda_at(freqs, n), c.q);
    const std::int64_t first = first_index_at_least(freqs, std::pow(static_cast<long double>(c.q), k));
    const double lead = 1.0 / std::pow(static_cast<double>(std::max(k, 1)), 2.0);
    return std::ldexp(lead, -static_cast<int>(std::min<std::int64_t>(n - first, 2000)));
}

// Σ_{n=A}^{B} n^{-p} by Euler–Maclaurin with two correction terms.
long double power_sum_em(long double p, long double A, long double B) {
    auto f = [&](long double n) { return std::pow(n, -p); };
    auto f1 = [&](long double n) { return -p * std::pow(n, -p - 1); };
    auto f3 = [&](long double n) { return -p * (p + 1) * (p + 2) * std::pow(n, -p - 3); };
    const long double integral = (std::pow(A, 1 - p) - std::pow(B, 1 - p)) / (p - 1);
    return integral + (f(A) + f(B)) / 2 + (f1(B) - f1(A)) / 12 - (f3(B) - f3(A)) / 720;
}

std::int64_t checked_index(std::int64_t n) {
    if (n < 1) throw ValidationError("sequence index must be >= 1, got " + std::to_string(n));
    return n;
}

}  // namespace

void validate(const FrequencyRule& rule) {
    std::visit(overloaded{
                   [](const GeometricFrequency& g) {
                       if (!(g.lambda > 1.0) || !std::isfinite(g.lambda))
                           throw ValidationError("geometric frequency ratio must be > 1");
                   },
                   [](const PowerFrequency& p) {
                       if (!(p.exponent > 0.0) || !std::isfinite(p.exponent))
                           throw ValidationError("power frequency exponent must be > 0");
                   },
                   [](const ExplicitFrequency& e) {
                       if (e.values.empty()) throw ValidationError("explicit frequency list is empty");
                       if (e.values.front() != 1.0) throw ValidationError("explicit frequencies must start at 1");
                       for (std::size_t i = 1; i < e.values.size(); ++i)
                           if (!(e.values[i] > e.values[i - 1]))
                               throw ValidationError("explicit frequency list must be strictly increasing");
                   },
               },
               rule);
}

void validate(const CoefficientRule& rule) {
    std::visit(overloaded{
                   [](const GeometricCoefficients& g) {
                       if (!(g.beta > 0.0) || !(g.lambda > 1.0) || !std::isfinite(g.beta) || !std::isfinite(g.lambda))
                           throw ValidationError("geometric coefficients need beta > 0 and lambda > 1");
                   },
                   [](const PowerCoefficients& p) {
                       if (!(p.b > 1.0) || !std::isfinite(p.b))
                           throw ValidationError("power coefficients need b > 1");
                   },
                   [](const PerBlockGeometricCoefficients& p) {
                       if (!(p.q > 1.0) || !std::isfinite(p.q))
                           throw ValidationError("per-block coefficients need q > 1");
                   },
                   [](const ExplicitCoefficients& e) {
                       if (e.values.empty()) throw ValidationError("explicit coefficient list is empty");
                       for (double v : e.values)
                           if (!std::isfinite(v)) throw ValidationError("explicit coefficients must be finite");
                   },
               },
               rule);
}

std::optional<std::int64_t> term_limit(const FrequencyRule& rule) {
    if (const auto* e = std::get_if<ExplicitFrequency>(&rule)) return static_cast<std::int64_t>(e->values.size());
    return std::nullopt;
}

std::optional<std::int64_t> term_limit(const CoefficientRule& rule) {
    if (const auto* e = std::get_if<ExplicitCoefficients>(&rule)) return static_cast<std::int64_t>(e->values.size());
    return std::nullopt;
}

long double lambda_at(const FrequencyRule& rule, std::int64_t n) {
    checked_index(n);
    return std::visit(overloaded{
                          [n](const GeometricFrequency& g) {
                              return std::pow(static_cast<long double>(g.lambda), static_cast<long double>(n - 1));
                          },
                          [n](const PowerFrequency& p) {
                              return std::pow(static_cast<long double>(n), static_cast<long double>(p.exponent));
                          },
                          [n](const ExplicitFrequency& e) {
                              if (n > static_cast<std::int64_t>(e.values.size()))
                                  throw ValidationError("index beyond explicit frequency list");
                              return static_cast<long double>(e.values[static_cast<std::size_t>(n - 1)]);
                          },
                      },
                      rule);
}

bool integral_frequencies(const FrequencyRule& rule) {
    return std::visit(overloaded{
                          [](const GeometricFrequency& g) { return g.lambda == std::floor(g.lambda); },
                          [](const PowerFrequency& p) { return p.exponent == std::floor(p.exponent); },
                          [](const ExplicitFrequency& e) {
                              return std::all_of(e.values.begin(), e.values.end(),
                                                 [](double v) { return v == std::floor(v); });
                          },
                      },
                      rule);
}

double gap_ratio(const FrequencyRule& rule, std::int64_t n_max) {
    if (n_max < 2) throw ValidationError("gap_ratio needs n_max >= 2");
    return std::visit(overloaded{
                          [](const GeometricFrequency& g) { return g.lambda; },
                          [](const PowerFrequency& p) { return std::pow(2.0, p.exponent); },
                          [n_max](const ExplicitFrequency& e) {
                              const auto last = std::min<std::size_t>(e.values.size(), static_cast<std::size_t>(n_max));
                              double q = 1.0;
                              for (std::size_t i = 1; i < last; ++i) q = std::max(q, e.values[i] / e.values[i - 1]);
                              return q;
                          },
                      },
                      rule);
}

std::int64_t first_index_at_least(const FrequencyRule& rule, long double v) {
    if (v <= 1.0L) return 1;
    if (const auto* e = std::get_if<ExplicitFrequency>(&rule)) {
        const auto it = std::find_if(e->values.begin(), e->values.end(),
                                     [v](double x) { return snapped_at_least(x, v); });
        return static_cast<std::int64_t>(it - e->values.begin()) + 1;
    }
    long double guess = 1.0L;
    if (const auto* g = std::get_if<GeometricFrequency>(&rule))
        guess = 1.0L + std::ceil(snap(std::log(v) / std::log(static_cast<long double>(g->lambda))));
    else if (const auto* p = std::get_if<PowerFrequency>(&rule))
        guess = std::ceil(snap(std::pow(v, 1.0L / static_cast<long double>(p->exponent))));
    if (!(guess < 9.0e18L)) throw ValidationError("frequency index overflows 64 bits");
    std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess));
    while (n > 1 && snapped_at_least(lambda_at(rule, n - 1), v)) --n;
    while (!snapped_at_least(lambda_at(rule, n), v)) ++n;
    return n;
}

double coefficient_at(const CoefficientRule& coeffs, const FrequencyRule& freqs, std::int64_t n) {
    if (const auto* p = std::get_if<PerBlockGeometricCoefficients>(&coeffs))
        return per_block_coefficient(*p, freqs, checked_index(n));
    return coefficient_at(coeffs, n);
}

double coefficient_at(const CoefficientRule& coeffs, std::int64_t n) {
    checked_index(n);
    return std::visit(overloaded{
                          [n](const GeometricCoefficients& g) {
                              return std::pow(g.lambda, -g.beta * static_cast<double>(n));
                          },
                          [n](const PowerCoefficients& p) { return std::pow(static_cast<double>(n), -p.b); },
                          [](const PerBlockGeometricCoefficients&) -> double {
                              throw ValidationError("per-block coefficients need a frequency rule");
                          },
                          [n](const ExplicitCoefficients& e) {
                              if (n > static_cast<std::int64_t>(e.values.size())) return 0.0;
                              return e.values[static_cast<std::size_t>(n - 1)];
                          },
                      },
                      coeffs);
}

BlockStats block_stats(const CoefficientRule& coeffs, const FrequencyRule& freqs, double q, int k) {
    if (!(q > 1.0)) throw ValidationError("block ratio q must be > 1");
    if (k < 0) throw ValidationError("block index must be >= 0");
    const long double lo = std::pow(static_cast<long double>(q), k);
    const long double hi = lo * q;
    BlockStats out;
    out.k = k;
    out.index_range.first = first_index_at_least(freqs, lo);
    out.index_range.last = first_index_at_least(freqs, hi) - 1;
    if (auto lim = term_limit(freqs)) {
        if (out.index_range.first > *lim)
            throw EmptyBlockError("block " + std::to_string(k) + " lies beyond the explicit frequency list");
        out.index_range.last = std::min(out.index_range.last, *lim);
    }
    if (out.index_range.last < out.index_range.first)
        throw EmptyBlockError("block " + std::to_string(k) + " holds no frequency (gap condition fails)");

    const std::int64_t first = out.index_range.first;
    const std::int64_t count = out.index_range.count();
    auto direct = [&](auto&& coef) {
        NeumaierSum acc;
        for (std::int64_t n = out.index_range.last; n >= first; --n) {
            const double a = coef(n);
            acc.add(a * a);
        }
        return acc.value();
    };

    double s2 = 0.0;
    if (const auto* g = std::get_if<GeometricCoefficients>(&coeffs)) {
        const long double lr = -2.0L * g->beta * std::log(static_cast<long double>(g->lambda));
        s2 = static_cast<double>(std::exp(lr * first) * std::expm1(lr * count) / std::expm1(lr));
    } else if (const auto* p = std::get_if<PowerCoefficients>(&coeffs)) {
        if (count <= kDirectBlockLimit)
            s2 = direct([&](std::int64_t n) { return coefficient_at(coeffs, n); });
        else
            s2 = static_cast<double>(power_sum_em(2.0L * p->b, first, out.index_range.last));
    } else if (const auto* pb = std::get_if<PerBlockGeometricCoefficients>(&coeffs)) {
        if (std::fabs(pb->q - q) <= 1e-12 * q) {
            const double lead = 1.0 / std::pow(static_cast<double>(std::max(k, 1)), 2.0);
            s2 = lead * lead * (-std::expm1(-static_cast<double>(count) * std::log(4.0))) / 0.75;
        } else if (count <= kDirectBlockLimit) {
            s2 = direct([&](std::int64_t n) { return coefficient_at(coeffs, freqs, n); });
        } else {
            throw ValidationError("per-block coefficients measured with a foreign q need an enumerable block");
        }
    } else {
        s2 = direct([&](std::int64_t n) { return coefficient_at(coeffs, n); });
    }
    out.s_squared = s2;
    out.s = std::sqrt(s2);
    return out;
}

GapExponents estimate_sigma_tau(const CoefficientRule& coeffs, const FrequencyRule& freqs, int k_min, int k_max) {
    if (k_min < 1 || k_max <= k_min) throw ValidationError("estimate_sigma_tau needs k_max > k_min >= 1");
    validate(coeffs);
    validate(freqs);
    GapExponents out;
    out.q = gap_ratio(freqs, term_limit(freqs).value_or(std::int64_t{1} << 20));
    if (!(out.q > 1.0)) throw ValidationError("gap ratio must exceed 1");
    out.window = {k_min, k_max};
    const double lq = std::log(out.q);
    std::vector<double> xs, ys;
    for (int k = k_min; k <= k_max; ++k) {
        BlockStats b = block_stats(coeffs, freqs, out.q, k);
        if (!(b.s > 0.0)) throw ValidationError("block " + std::to_string(k) + " has zero mass");
        const double ml = -std::log(b.s);
        out.per_k.emplace_back(k, ml / (k * lq));
        xs.push_back(k * lq);
        ys.push_back(ml);
        out.blocks.push_back(b);
    }
    for (std::size_t i = 0; i + 1 < out.blocks.size(); ++i)
        out.local.emplace_back(out.blocks[i].k, (ys[i + 1] - ys[i]) / lq);
    auto minmax = [](const std::vector<std::pair<int, double>>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end(),
                                            [](const auto& a, const auto& b) { return a.second < b.second; });
        return std::pair{lo->second, hi->second};
    };
    std::tie(out.sigma_est, out.tau_est) = minmax(out.local);
    std::tie(out.raw_min, out.raw_max) = minmax(out.per_k);
    out.slope = fit_line(xs, ys).slope;
    return out;
}

std::optional<std::pair<double, double>> closed_form_exponents(const CoefficientRule& coeffs,
                                                               const FrequencyRule& freqs) {
    if (const auto* gc = std::get_if<GeometricCoefficients>(&coeffs)) {
        if (const auto* gf = std::get_if<GeometricFrequency>(&freqs)) {
            const double e = gc->beta * std::log(gc->lambda) / std::log(gf->lambda);
            return std::pair{e, e};
        }
    }
    if (const auto* pc = std::get_if<PowerCoefficients>(&coeffs)) {
        if (const auto* pf = std::get_if<PowerFrequency>(&freqs)) {
            const double e = (2.0 * pc->b - 1.0) / (2.0 * pf->exponent);
            return std::pair{e, e};
        }
    }
    if (std::holds_alternative<PowerCoefficients>(coeffs) && std::holds_alternative<GeometricFrequency>(freqs))
        return std::pair{0.0, 0.0};
    if (std::holds_alternative<PerBlockGeometricCoefficients>(coeffs)) return std::pair{0.0, 0.0};
    return std::nullopt;
}

namespace {

double explicit_tail(const ExplicitCoefficients& e, std::int64_t N, int power) {
    NeumaierSum acc;
    for (std::int64_t n = static_cast<std::int64_t>(e.values.size()); n > N; --n) {
        const double a = std::fabs(e.values[static_cast<std::size_t>(n - 1)]);
        acc.add(power == 1 ? a : a * a);
    }
    return acc.value();
}

double tail_impl(const CoefficientRule& coeffs, const FrequencyRule* freqs, std::int64_t N, int power) {
    if (N < 0) throw ValidationError("tail index must be >= 0");
    if (freqs) {
        if (auto lim = term_limit(*freqs); lim && N >= *lim) return 0.0;
    }
    const double pw = power;
    return std::visit(
        overloaded{
            [&](const GeometricCoefficients& g) {
                const double r = std::pow(g.lambda, -pw * g.beta);
                return std::pow(g.lambda, -pw * g.beta * static_cast<double>(N + 1)) / (1.0 - r);
            },
            [&](const PowerCoefficients& p) {
                const double e = pw * p.b;
                if (N == 0) return 1.0 + 1.0 / (e - 1.0);
                return std::pow(static_cast<double>(N), 1.0 - e) / (e - 1.0);
            },
            [&](const PerBlockGeometricCoefficients& p) -> double {
                if (!freqs) throw ValidationError("per-block coefficient tails need a frequency rule");
                const double a = per_block_coefficient(p, *freqs, N + 1);
                const int k = block_of(lambda_at(*freqs, N + 1), p.q);
                if (power == 1) {
                    const double rest = k >= 1 ? 2.0 / k : std::numbers::pi * std::numbers::pi / 3.0;
                    return 2.0 * a + rest;
                }
                const double pi4 = std::pow(std::numbers::pi, 4);
                const double rest = k >= 1 ? 1.0 / (3.0 * std::pow(k, 3.0)) : pi4 / 90.0;
                return (4.0 / 3.0) * (a * a + rest);
            },
            [&](const ExplicitCoefficients& e) { return explicit_tail(e, N, power); },
        },
        coeffs);
}

}  // namespace

double l1_tail(const CoefficientRule& coeffs, std::int64_t N) { return tail_impl(coeffs, nullptr, N, 1); }
double l1_tail(const CoefficientRule& coeffs, const FrequencyRule& freqs, std::int64_t N) {
    return tail_impl(coeffs, &freqs, N, 1);
}
double l2_tail(const CoefficientRule& coeffs, std::int64_t N) { return tail_impl(coeffs, nullptr, N, 2); }
double l2_tail(const CoefficientRule& coeffs, const FrequencyRule& freqs, std::int64_t N) {
    return tail_impl(coeffs, &freqs, N, 2);
}

}  // namespace lacuna
