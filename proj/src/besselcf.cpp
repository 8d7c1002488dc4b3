#include "lacuna/besselcf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lacuna/parallel.hpp"

namespace lacuna {

namespace {

constexpr double kLogUnderflow = -700.0;

long double j0_series(long double x) {
    const long double q = -0.25L * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-21L * std::max(1.0L, std::fabs(sum))) break;
    }
    return sum;
}

long double j0_asymptotic(long double x) {
    // P and Q of the Hankel expansion with μ = 0: coefficients Π(2j-1)² / (k! 8^k).
    long double p = 0.0L, q = 0.0L;
    long double a = 1.0L;  // a_k / x^k
    long double prev = std::numeric_limits<long double>::infinity();
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            const long double m = 2.0L * k - 1.0L;
            a *= m * m / (8.0L * k * x);
        }
        if (std::fabs(a) > prev) break;
        prev = std::fabs(a);
        long double sgn = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
        if (k % 2 == 1) sgn = -sgn;
        if (k % 2 == 0)
            p += sgn * a;
        else
            q += sgn * a;
        if (std::fabs(a) < 1e-21L) break;
    }
    const long double c = std::cos(x), s = std::sin(x);
    const long double cchi = (c + s) / std::sqrt(2.0L);  // cos(x - π/4)
    const long double schi = (s - c) / std::sqrt(2.0L);  // sin(x - π/4)
    return std::sqrt(2.0L / (std::numbers::pi_v<long double> * x)) * (p * cchi - q * schi);
}

void require_one_sided(const SeriesSpec& spec) {
    if (spec.form != SeriesForm::OneSided)
        throw ValidationError("characteristic functions are implemented for one-sided series only");
}

std::int64_t resolve_terms(const SeriesSpec& spec, const TermChoice& choice) {
    if (choice.terms) {
        if (*choice.terms < 0) throw ValidationError("term count must be >= 0");
        return *choice.terms;
    }
    return truncation_index(spec, choice.eps_tail);
}

// c_n with factor arguments ξ c_n.
std::vector<double> factor_rates(const PreparedSeries& ps, double x, double y) {
    std::vector<double> c(ps.terms().size());
    for (std::size_t n = 1; n <= c.size(); ++n)
        c[n - 1] = kTwoPi * std::fabs(ps.terms()[n - 1].a) * ps.increment_modulus(n, x, y);
    return c;
}

double bessel_product(std::span<const double> rates, double xi) {
    double log_sum = 0.0;
    bool negative = false;
    for (double c : rates) {
        const double z = xi * c;
        if (z == 0.0) continue;
        const double j = bessel_j0(z);
        if (j == 0.0) return 0.0;
        if (j < 0.0) negative = !negative;
        log_sum += std::log(std::fabs(j));
        if (log_sum < kLogUnderflow) return 0.0;
    }
    const double v = std::exp(log_sum);
    return negative ? -v : v;
}

double truncation_log_bound(const SeriesSpec& spec, std::int64_t N, double xi) {
    if (xi == 0.0) return 0.0;
    const double sup = basis_info(spec.basis).sup_norm;
    const double tail2 = l2_tail(spec.coeffs, spec.freqs, N);
    if (tail2 == 0.0) return 0.0;
    const double scale = 4.0 * kPi * xi * sup;
    const double zmax2 = scale * scale * tail2;
    if (!(zmax2 < 4.0)) return std::numeric_limits<double>::infinity();
    return (zmax2 / 4.0) / (1.0 - zmax2 / 4.0);
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

MCEstimate summarize(const std::vector<double>& re, const std::vector<double>& im, std::uint64_t seed) {
    const std::size_t R = re.size();
    MCEstimate out;
    out.replicates = static_cast<std::int64_t>(R);
    out.seed = seed;
    const double mr = pairwise_sum(re.data(), R) / static_cast<double>(R);
    const double mi = pairwise_sum(im.data(), R) / static_cast<double>(R);
    std::vector<double> dev(R);
    for (std::size_t i = 0; i < R; ++i) dev[i] = (re[i] - mr) * (re[i] - mr);
    const double vr = pairwise_sum(dev.data(), R) / static_cast<double>(R - 1);
    for (std::size_t i = 0; i < R; ++i) dev[i] = (im[i] - mi) * (im[i] - mi);
    const double vi = pairwise_sum(dev.data(), R) / static_cast<double>(R - 1);
    out.mean = {mr, mi};
    out.std_error = std::sqrt(vr / static_cast<double>(R));
    out.std_error_imag = std::sqrt(vi / static_cast<double>(R));
    return out;
}

SeriesSpec seeded(const SeriesSpec& spec, std::uint64_t seed) {
    if (!std::holds_alternative<SteinhausPhases>(spec.phases))
        throw ValidationError("Monte Carlo estimates need Steinhaus phases");
    SeriesSpec s = spec;
    s.phases = SteinhausPhases{seed};
    return s;
}

double pairing(cplx xi_vec, cplx d, int codomain) {
    return codomain == 1 ? xi_vec.real() * d.real() : xi_vec.real() * d.real() + xi_vec.imag() * d.imag();
}

// e^{-2πi t} with t reduced to turns.
cplx phase_of(double t) { return expi_turns(-(t - std::floor(t))); }

void check_atoms(std::span<const Atom> atoms) {
    if (atoms.empty()) throw ValidationError("measure needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.x)) throw ValidationError("atom weights must be >= 0");
        total += a.weight;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw ValidationError("atom weights must sum to 1");
}

void check_replicates(std::int64_t replicates) {
    if (replicates < 100) throw ValidationError("Monte Carlo needs at least 100 replicates");
}

constexpr std::size_t kReplicateChunks = 64;

}  // namespace

double bessel_j0(double x) {
    const long double ax = std::fabs(static_cast<long double>(x));
    if (ax == 0.0L) return 1.0;
    return static_cast<double>(ax <= kJ0Crossover ? j0_series(ax) : j0_asymptotic(ax));
}

CharFnSample charfn_increment(const SeriesSpec& spec, double x, double y, double xi, const TermChoice& choice) {
    require_one_sided(spec);
    if (!(xi >= 0.0)) throw ValidationError("radial frequency must be >= 0");
    const std::int64_t N = resolve_terms(spec, choice);
    CharFnSample out;
    out.xi = xi;
    out.terms_used = N;
    if (x == y || xi == 0.0) return out;
    PreparedSeries ps(spec, N);
    out.value = bessel_product(factor_rates(ps, x, y), xi);
    out.truncation_bound = truncation_log_bound(spec, N, xi);
    return out;
}

MCEstimate mc_charfn(const SeriesSpec& spec, double x, double y, cplx xi_vec, std::int64_t replicates,
                     std::uint64_t seed, const TermChoice& choice, int threads) {
    require_one_sided(spec);
    check_replicates(replicates);
    const SeriesSpec s = seeded(spec, seed);
    const std::int64_t N = resolve_terms(s, choice);
    const int cd = codomain_dim(s);
    const auto R = static_cast<std::size_t>(replicates);
    std::vector<double> re(R), im(R);
    const PreparedSeries proto(s, N);
    const std::vector<cplx> row_x = proto.basis_row(x), row_y = proto.basis_row(y);
    parallel_chunks(R, kReplicateChunks, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        PreparedSeries ps = proto;
        for (std::size_t r = b; r < e; ++r) {
            ps.set_phases(r);
            const cplx d = ps.value_from_row(row_x) - ps.value_from_row(row_y);
            const cplx v = (x == y) ? cplx{1.0, 0.0} : phase_of(pairing(xi_vec, d, cd));
            re[r] = v.real();
            im[r] = v.imag();
        }
    });
    return summarize(re, im, seed);
}

std::vector<double> expected_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms,
                                        std::span<const double> xis, const TermChoice& choice) {
    require_one_sided(spec);
    check_atoms(atoms);
    const std::int64_t N = resolve_terms(spec, choice);
    const PreparedSeries ps(spec, N);
    std::vector<NeumaierSum> acc(xis.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double wi = atoms[i].weight;
        for (auto& a : acc) a.add(wi * wi);
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            const double w = 2.0 * wi * atoms[j].weight;
            if (atoms[i].x == atoms[j].x) {
                for (auto& a : acc) a.add(w);
                continue;
            }
            const auto rates = factor_rates(ps, atoms[i].x, atoms[j].x);
            for (std::size_t k = 0; k < xis.size(); ++k) acc[k].add(w * bessel_product(rates, xis[k]));
        }
    }
    std::vector<double> out;
    for (const auto& a : acc) out.push_back(a.value());
    return out;
}

double expected_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms, double xi, const TermChoice& choice) {
    const double xs[1] = {xi};
    return expected_fourier_sq(spec, atoms, std::span<const double>(xs), choice)[0];
}

std::vector<MCEstimate> mc_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms,
                                      std::span<const cplx> xi_vecs, std::int64_t replicates, std::uint64_t seed,
                                      const TermChoice& choice, int threads) {
    require_one_sided(spec);
    check_atoms(atoms);
    check_replicates(replicates);
    const SeriesSpec s = seeded(spec, seed);
    const std::int64_t N = resolve_terms(s, choice);
    const int cd = codomain_dim(s);
    const auto R = static_cast<std::size_t>(replicates);
    const std::size_t K = xi_vecs.size();
    std::vector<std::vector<double>> vals(K, std::vector<double>(R));
    const PreparedSeries proto(s, N);
    std::vector<std::vector<cplx>> rows;
    for (const Atom& a : atoms) rows.push_back(proto.basis_row(a.x));
    parallel_chunks(R, kReplicateChunks, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        PreparedSeries ps = proto;
        std::vector<cplx> S(atoms.size());
        for (std::size_t r = b; r < e; ++r) {
            ps.set_phases(r);
            for (std::size_t i = 0; i < atoms.size(); ++i) S[i] = ps.value_from_row(rows[i]);
            for (std::size_t k = 0; k < K; ++k) {
                cplx mu{0.0, 0.0};
                for (std::size_t i = 0; i < atoms.size(); ++i)
                    mu += atoms[i].weight * phase_of(pairing(xi_vecs[k], S[i], cd));
                vals[k][r] = std::norm(mu);
            }
        }
    });
    std::vector<MCEstimate> out;
    const std::vector<double> zeros(R, 0.0);
    for (std::size_t k = 0; k < K; ++k) out.push_back(summarize(vals[k], zeros, seed));
    return out;
}

MCEstimate mc_fourier_sq(const SeriesSpec& spec, std::span<const Atom> atoms, cplx xi_vec, std::int64_t replicates,
                         std::uint64_t seed, const TermChoice& choice, int threads) {
    const cplx v[1] = {xi_vec};
    return mc_fourier_sq(spec, atoms, std::span<const cplx>(v), replicates, seed, choice, threads)[0];
}

double charfn_l1_norm(const SeriesSpec& spec, double x, double y, double xi_max, double quadrature_step,
                      const TermChoice& choice) {
    require_one_sided(spec);
    if (x == y) throw ValidationError("charfn_l1_norm needs x != y (the integral diverges)");
    if (!(xi_max > 0.0) || !(quadrature_step > 0.0)) throw ValidationError("xi_max and step must be > 0");
    const std::int64_t N = resolve_terms(spec, choice);
    const PreparedSeries ps(spec, N);
    const auto rates = factor_rates(ps, x, y);
    const bool planar = codomain_dim(spec) == 2;
    const auto steps = static_cast<std::int64_t>(std::ceil(xi_max / quadrature_step));
    const double h = xi_max / static_cast<double>(steps);
    NeumaierSum acc;
    for (std::int64_t i = 0; i <= steps; ++i) {
        const double r = h * static_cast<double>(i);
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        const double f = std::fabs(bessel_product(rates, r));
        acc.add(w * (planar ? f * r : f));
    }
    return (planar ? kTwoPi : 2.0) * h * acc.value();
}

std::vector<Atom> uniform_atoms(std::int64_t count) {
    if (count < 1) throw ValidationError("atom count must be >= 1");
    std::vector<Atom> out(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = {static_cast<double>(i) / static_cast<double>(count),
                                            1.0 / static_cast<double>(count)};
    return out;
}

}  // namespace lacuna
