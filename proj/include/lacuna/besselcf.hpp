#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lacuna/numeric.hpp"
#include "lacuna/sampler.hpp"

namespace lacuna {

// Power series below this argument, Hankel asymptotic expansion above.
inline constexpr double kJ0Crossover = 16.0;

double bessel_j0(double x);

struct CharFnSample {
    double xi = 0.0;
    double value = 1.0;
    std::int64_t terms_used = 0;
    double truncation_bound = 0.0;  // bound on |log ψ - log ψ_N|; +inf when not certifiable
};

struct MCEstimate {
    cplx mean{1.0, 0.0};
    double std_error = 0.0;       // real part
    double std_error_imag = 0.0;  // imaginary part
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
};

struct Atom {
    double x = 0.0;
    double weight = 0.0;
};

// Number of series terms: an explicit count, or the truncation index for eps_tail.
struct TermChoice {
    std::optional<std::int64_t> terms;
    double eps_tail = 1e-8;
};

// E e^{-2πi⟨ξ, S(x)-S(y)⟩} as a product of J₀ factors (radial in ξ).
CharFnSample charfn_increment(const SeriesSpec& spec, double x, double y, double xi, const TermChoice& choice = {});

// Monte Carlo mean of e^{-2πi⟨ξ, S(x)-S(y)⟩} over Steinhaus phase draws; replicate r uses stream r.
// xi_vec carries (ξ₁, ξ₂); real-valued series use ξ₁ only.
MCEstimate mc_charfn(const SeriesSpec& spec, double x, double y, cplx xi_vec, std::int64_t replicates,
                     std::uint64_t seed, const TermChoice& choice = {}, int threads = 1);

double expected_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms, double xi,
                           const TermChoice& choice = {});
std::vector<double> expected_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms,
                                        std::span<const double> xis, const TermChoice& choice = {});

MCEstimate mc_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms, cplx xi_vec, std::int64_t replicates,
                         std::uint64_t seed, const TermChoice& choice = {}, int threads = 1);
// One phase draw per replicate shared across all frequencies.
std::vector<MCEstimate> mc_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms,
                                      std::span<const cplx> xi_vecs, std::int64_t replicates, std::uint64_t seed,
                                      const TermChoice& choice = {}, int threads = 1);

// Trapezoid value of ∫|ψ_{x,y}| over the ball |ξ| <= xi_max (2π∫|ψ|r dr in the plane, 2∫|ψ|dr on the line).
// The tail beyond xi_max is not bounded.
double charfn_l1_norm(const SeriesSpec& spec, double x, double y, double xi_max, double quadrature_step,
                      const TermChoice& choice = {});

// Uniform atoms i/count on [0,1), equal weights.
std::vector<Atom> uniform_atoms(std::int64_t count);

}  // namespace lacuna
