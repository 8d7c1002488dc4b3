#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lacuna/basis.hpp"
#include "lacuna/numeric.hpp"
#include "lacuna/pointcloud.hpp"
#include "lacuna/sequences.hpp"

namespace lacuna {

struct SteinhausPhases {
    std::uint64_t seed = 0;
    bool operator==(const SteinhausPhases&) const = default;
};
struct EquidistributedPhases {
    double alpha = 0.0;  // θₙ = nα mod 1
    bool operator==(const EquidistributedPhases&) const = default;
};
struct ZeroPhases {
    bool operator==(const ZeroPhases&) const = default;
};
using PhaseModel = std::variant<SteinhausPhases, EquidistributedPhases, ZeroPhases>;

enum class SeriesForm {
    OneSided,  // Σ_{n>=1} aₙ Xₙ φ(λₙ x)
    TwoSided,  // n ∈ ℤ with aₙ = λ^{-βn}, λₙ = λⁿ; requires φ(0) = 0
    Vortex,    // Σ_{n∈ℤ} (e^{-4π²in²x} - 1) Xₙ / (-4π²n²)
};

struct SeriesSpec {
    CoefficientRule coeffs = GeometricCoefficients{};
    FrequencyRule freqs = GeometricFrequency{};
    BasisFunction basis = ExpBasis{};
    PhaseModel phases = SteinhausPhases{};
    double freq_scale = 1.0;  // evaluated frequencies are freq_scale * λₙ
    SeriesForm form = SeriesForm::OneSided;
    bool operator==(const SeriesSpec&) const = default;
};

void validate(const SeriesSpec& spec);
std::string canonical_string(const SeriesSpec& spec);
std::uint64_t spec_hash(const SeriesSpec& spec);
int codomain_dim(const SeriesSpec& spec);

namespace presets {
SeriesSpec weierstrass(double beta, double lambda, PhaseModel phases = SteinhausPhases{});
SeriesSpec riemann(double a, double b, PhaseModel phases = SteinhausPhases{});
SeriesSpec real_sine(double a, double b, PhaseModel phases = SteinhausPhases{});
SeriesSpec weierstrass_mandelbrot(double beta, double lambda, PhaseModel phases = SteinhausPhases{});
SeriesSpec riemann_vortex(PhaseModel phases = SteinhausPhases{});
SeriesSpec expdiff(double beta, double lambda, PhaseModel phases = SteinhausPhases{});
SeriesSpec takagi(double beta, double lambda, PhaseModel phases = SteinhausPhases{});
// Σ n^{-2} Xₙ e^{2πi 2ⁿ x}
SeriesSpec dyadic_tau_zero(PhaseModel phases = SteinhausPhases{});
}  // namespace presets

struct IntervalSet {
    double lo = 0.0;
    double hi = 1.0;
    std::int64_t points = 1024;  // half-open grid lo + (hi-lo) j / points
    bool operator==(const IntervalSet&) const = default;
};
struct CantorSet {
    double ratio = 1.0 / 3.0;  // kept fraction on each side
    int level = 10;
    bool operator==(const CantorSet&) const = default;
};
using TestSet = std::variant<IntervalSet, CantorSet>;

inline constexpr int kCantorMaxLevel = 24;

void validate(const TestSet& set);
double hausdorff_dim(const TestSet& set);
std::vector<double> materialize(const TestSet& set);
std::vector<double> cantor_points(double r, int m);

// θ₁..θ_count for the stream.
std::vector<double> draw_phases(const PhaseModel& model, std::int64_t count, std::uint64_t stream_id);
// θ₀, θ₋₁, ..., θ_{-(count-1)} for the stream; independent of the positive side.
std::vector<double> draw_phases_low(const PhaseModel& model, std::int64_t count, std::uint64_t stream_id);

struct Truncation {
    std::int64_t N = 0;      // positive-side cutoff
    std::int64_t M = 0;      // negative-side cutoff (two-sided only)
    double tail_high = 0.0;  // certified bound of the omitted positive terms
    double tail_low = 0.0;   // certified bound of the omitted negative terms on |x| <= x_abs_max
    double tail_bound() const { return tail_high + tail_low; }
};

inline constexpr std::int64_t kMaxTerms = 10'000'000;

Truncation truncation_plan(const SeriesSpec& spec, double eps_tail, double x_abs_max = 1.0);
std::int64_t truncation_index(const SeriesSpec& spec, double eps_tail);

// Tail of the positive side after N terms (sup over x).
double high_tail_bound(const SeriesSpec& spec, std::int64_t N);

enum class EvalPath { Auto, Direct, Spectral };

struct EvalOptions {
    EvalPath path = EvalPath::Auto;
    int threads = 1;
    std::optional<std::int64_t> terms;  // overrides the truncation search (tail bound still certified)
};

struct SampledCurve {
    std::vector<double> xs;
    std::vector<cplx> values;
    std::int64_t truncation_N = 0;
    std::int64_t truncation_M = 0;
    double tail_bound = 0.0;
    std::uint64_t spec_hash = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    int codomain_dim = 2;
    EvalPath path_used = EvalPath::Direct;
};

// Partial sums with fixed terms and phases; reusable across points and phase draws.
class PreparedSeries {
public:
    struct Term {
        double a = 0.0;
        DoubleDouble freq;   // freq_scale * λₙ
        DoubleDouble freq2;  // λ_basis * freq for ExpDiff
        cplx weight;         // aₙ Xₙ (Vortex: aₙ (Xₙ + X₋ₙ) / 4π²)
    };
    struct LowTerm {
        double a = 0.0;
        long double freq = 0.0L;
        cplx weight;
    };

    PreparedSeries(const SeriesSpec& spec, std::int64_t N, std::int64_t M = 0);

    void set_phases(std::uint64_t stream_id);
    void set_phases(std::span<const double> high, std::span<const double> low);

    cplx value(double x) const;
    // Phase-independent factors φ(λₙx) of a one-sided series; value_from_row reproduces value(x) bit for bit.
    std::vector<cplx> basis_row(double x) const;
    cplx value_from_row(std::span<const cplx> row) const;
    // |φ(λₙx) - φ(λₙy)| for term n (1-based); the sine basis uses |e(λₙx) - e(λₙy)|.
    double increment_modulus(std::size_t n, double x, double y) const;

    const SeriesSpec& spec() const { return spec_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::int64_t N() const { return static_cast<std::int64_t>(terms_.size()); }
    std::int64_t M() const { return static_cast<std::int64_t>(low_.size()); }

private:
    cplx basis_at(const Term& t, double x) const;
    cplx basis_at(const Term& t, DoubleDouble x) const;

    SeriesSpec spec_;
    std::vector<Term> terms_;
    std::vector<LowTerm> low_;
    cplx zero_weight_{1.0, 0.0};  // X₀ for TwoSided and Vortex
};

bool spectral_eligible(const SeriesSpec& spec, const TestSet& set);

SampledCurve eval_series(const SeriesSpec& spec, const TestSet& set, double eps_tail, std::uint64_t stream_id,
                         const EvalOptions& opts = {});

// Direct evaluation at arbitrary points.
SampledCurve eval_series_at(const SeriesSpec& spec, std::span<const double> xs, double eps_tail,
                            std::uint64_t stream_id, const EvalOptions& opts = {});

// (x, Re S, Im S) or (x, S) for real codomain; values are raw.
PointCloud eval_graph(const SeriesSpec& spec, const TestSet& set, double eps_tail, std::uint64_t stream_id,
                      const EvalOptions& opts = {});

PointCloud image_points(const SampledCurve& curve);
PointCloud graph_points(const SampledCurve& curve, double value_scale = 1.0);

// 1 / (2 Σ|aₙ| sup|φ|), or 1 when the series is identically zero.
double graph_value_scale(const SeriesSpec& spec);

}  // namespace lacuna
