#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "lacuna/numeric.hpp"

namespace lacuna {

struct ExpBasis {  // e^{2πit}
    bool operator==(const ExpBasis&) const = default;
};
struct OneMinusExpBasis {  // 1 - e^{2πit}
    bool operator==(const OneMinusExpBasis&) const = default;
};
struct ExpDiffBasis {  // e^{2πit} - λ^{-β} e^{2πiλt}
    double beta = 0.5;
    double lambda = 2.0;
    bool operator==(const ExpDiffBasis&) const = default;
};
struct TakagiSineBasis {  // ‖t‖ + i sin 2πt
    bool operator==(const TakagiSineBasis&) const = default;
};
struct SineRealBasis {  // sin 2πt
    bool operator==(const SineRealBasis&) const = default;
};

using BasisFunction = std::variant<ExpBasis, OneMinusExpBasis, ExpDiffBasis, TakagiSineBasis, SineRealBasis>;

struct LipschitzBounds {
    double L = 0.0;
    double delta = 0.0;
};

struct BasisInfo {
    std::string name;
    double sup_norm = 0.0;
    std::optional<LipschitzBounds> declared;  // nullopt when unknown
    double global_lipschitz = 0.0;            // sup |φ'|, used for tail bounds
    int codomain_dim = 2;
    bool sine_path_only = false;  // handled by the sine product, not by the bi-Lipschitz condition
    bool periodic = true;
};

// Frozen constant for TakagiSine on |x-y| <= 1/4, from bilipschitz_probe with 10^6 samples (observed
// range [1.0, 6.36]) rounded outward.
inline constexpr double kTakagiLipschitz = 6.5;

BasisInfo basis_info(const BasisFunction& b);
void validate(const BasisFunction& b);

// φ(t); real-valued kinds return imag = 0.
cplx eval_basis(const BasisFunction& b, double t);

// φ(t) where frac(t) and, for ExpDiff, frac(λt) were reduced by the caller.
cplx eval_basis_reduced(const BasisFunction& b, double frac_t, double frac_lambda_t);

struct ProbeResult {
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t pairs = 0;
};

// Extremes of |φ(x)-φ(y)|/|x-y| over random pairs with 0 < |x-y| <= delta.
ProbeResult bilipschitz_probe(const BasisFunction& b, double delta, std::uint64_t samples, std::uint64_t seed);

}  // namespace lacuna
