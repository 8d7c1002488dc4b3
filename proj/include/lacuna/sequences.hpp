#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace lacuna {

// Frequency rules. All generate λ₁ = 1.
struct GeometricFrequency {
    double lambda = 2.0;  // λₙ = λ^(n-1)
    bool operator==(const GeometricFrequency&) const = default;
};
struct PowerFrequency {
    double exponent = 1.0;  // λₙ = n^a
    bool operator==(const PowerFrequency&) const = default;
};
struct ExplicitFrequency {
    std::vector<double> values;
    bool operator==(const ExplicitFrequency&) const = default;
};
using FrequencyRule = std::variant<GeometricFrequency, PowerFrequency, ExplicitFrequency>;

// Coefficient rules.
struct GeometricCoefficients {
    double beta = 0.5;  // aₙ = λ^(-βn)
    double lambda = 2.0;
    bool operator==(const GeometricCoefficients&) const = default;
};
struct PowerCoefficients {
    double b = 2.0;  // aₙ = n^(-b)
    bool operator==(const PowerCoefficients&) const = default;
};
// Within block k a geometric run with first term max(k,1)^-2 and ratio 1/2.
struct PerBlockGeometricCoefficients {
    double q = 2.0;
    bool operator==(const PerBlockGeometricCoefficients&) const = default;
};
struct ExplicitCoefficients {
    std::vector<double> values;
    bool operator==(const ExplicitCoefficients&) const = default;
};
using CoefficientRule =
    std::variant<GeometricCoefficients, PowerCoefficients, PerBlockGeometricCoefficients, ExplicitCoefficients>;

struct IndexRange {
    std::int64_t first = 0;
    std::int64_t last = -1;
    std::int64_t count() const { return last - first + 1; }
    bool operator==(const IndexRange&) const = default;
};

struct BlockStats {
    int k = 0;
    IndexRange index_range;
    double s = 0.0;
    double s_squared = 0.0;
};

struct GapExponents {
    double q = 0.0;
    std::vector<BlockStats> blocks;
    std::vector<std::pair<int, double>> per_k;  // -log s_k / (k log q)
    std::vector<std::pair<int, double>> local;  // -log(s_{k+1}/s_k) / log q
    double sigma_est = 0.0;                     // min of local exponents
    double tau_est = 0.0;                       // max of local exponents
    double raw_min = 0.0;                       // min of per_k
    double raw_max = 0.0;                       // max of per_k
    double slope = 0.0;                         // LS slope of -log s_k against k log q
    std::pair<int, int> window{0, 0};
};

void validate(const FrequencyRule& rule);
void validate(const CoefficientRule& rule);

// Number of terms a rule can supply; nullopt when unbounded.
std::optional<std::int64_t> term_limit(const FrequencyRule& rule);
std::optional<std::int64_t> term_limit(const CoefficientRule& rule);

long double lambda_at(const FrequencyRule& rule, std::int64_t n);

// True when every λₙ is an integer.
bool integral_frequencies(const FrequencyRule& rule);

double gap_ratio(const FrequencyRule& rule, std::int64_t n_max);

// Smallest n >= 1 with λₙ >= v (relative snapping tolerance 1e-12).
std::int64_t first_index_at_least(const FrequencyRule& rule, long double v);

// aₙ; the frequency rule is only consulted by per-block coefficients.
double coefficient_at(const CoefficientRule& coeffs, const FrequencyRule& freqs, std::int64_t n);
double coefficient_at(const CoefficientRule& coeffs, std::int64_t n);

BlockStats block_stats(const CoefficientRule& coeffs, const FrequencyRule& freqs, double q, int k);

// Uses q = gap_ratio(freqs).
GapExponents estimate_sigma_tau(const CoefficientRule& coeffs, const FrequencyRule& freqs, int k_min,
                                int k_max);

// Closed-form (σ, τ) where known: Geometric/Geometric, Power/Power, Power/Geometric and per-block pairs.
std::optional<std::pair<double, double>> closed_form_exponents(const CoefficientRule& coeffs,
                                                               const FrequencyRule& freqs);

// Upper bounds for Σ_{n>N}|aₙ| and Σ_{n>N}|aₙ|².
double l1_tail(const CoefficientRule& coeffs, std::int64_t N);
double l1_tail(const CoefficientRule& coeffs, const FrequencyRule& freqs, std::int64_t N);
double l2_tail(const CoefficientRule& coeffs, std::int64_t N);
double l2_tail(const CoefficientRule& coeffs, const FrequencyRule& freqs, std::int64_t N);

}  // namespace lacuna
