#include "lacuna/sampler.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <random>

#include "lacuna/parallel.hpp"

namespace lacuna {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

bool vanishes_at_zero(const BasisFunction& b) {
    return std::holds_alternative<OneMinusExpBasis>(b) || std::holds_alternative<TakagiSineBasis>(b) ||
           std::holds_alternative<SineRealBasis>(b);
}

std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

constexpr double kVortexScale = 1.0 / (4.0 * kPi * kPi);

}  // namespace

void validate(const SeriesSpec& spec) {
    validate(spec.coeffs);
    validate(spec.freqs);
    validate(spec.basis);
    if (const auto* e = std::get_if<EquidistributedPhases>(&spec.phases); e && !std::isfinite(e->alpha))
        throw ValidationError("equidistributed phase increment must be finite");
    if (!(spec.freq_scale > 0.0) || !std::isfinite(spec.freq_scale))
        throw ValidationError("freq_scale must be positive");
    if (spec.form == SeriesForm::TwoSided) {
        const auto* gc = std::get_if<GeometricCoefficients>(&spec.coeffs);
        const auto* gf = std::get_if<GeometricFrequency>(&spec.freqs);
        if (!gc || !gf || gc->lambda != gf->lambda || spec.freq_scale != gf->lambda)
            throw ValidationError("two-sided series need geometric coefficients and frequencies sharing lambda, "
                                  "with freq_scale = lambda");
        if (!(gc->beta < 1.0)) throw ValidationError("two-sided series need beta < 1");
        if (!vanishes_at_zero(spec.basis)) throw ValidationError("two-sided series need a basis with phi(0) = 0");
    }
    if (spec.form == SeriesForm::Vortex) {
        const auto* pc = std::get_if<PowerCoefficients>(&spec.coeffs);
        const auto* pf = std::get_if<PowerFrequency>(&spec.freqs);
        if (!pc || !pf || pc->b != 2.0 || pf->exponent != 2.0 || !std::holds_alternative<OneMinusExpBasis>(spec.basis) ||
            spec.freq_scale != 1.0)
            throw ValidationError("vortex form needs power(2) coefficients and frequencies with the one_minus_exp basis");
    }
}

std::string canonical_string(const SeriesSpec& spec) {
    std::string s = "coeffs=";
    s += std::visit(overloaded{
                        [](const GeometricCoefficients& g) { return "geometric(" + num(g.beta) + "," + num(g.lambda) + ")"; },
                        [](const PowerCoefficients& p) { return "power(" + num(p.b) + ")"; },
                        [](const PerBlockGeometricCoefficients& p) { return "per_block(" + num(p.q) + ")"; },
                        [](const ExplicitCoefficients& e) {
                            std::string r = "explicit(";
                            for (std::size_t i = 0; i < e.values.size(); ++i) r += (i ? "," : "") + num(e.values[i]);
                            return r + ")";
                        },
                    },
                    spec.coeffs);
    s += ";freqs=";
    s += std::visit(overloaded{
                        [](const GeometricFrequency& g) { return "geometric(" + num(g.lambda) + ")"; },
                        [](const PowerFrequency& p) { return "power(" + num(p.exponent) + ")"; },
                        [](const ExplicitFrequency& e) {
                            std::string r = "explicit(";
                            for (std::size_t i = 0; i < e.values.size(); ++i) r += (i ? "," : "") + num(e.values[i]);
                            return r + ")";
                        },
                    },
                    spec.freqs);
    s += ";basis=" + basis_info(spec.basis).name;
    if (const auto* e = std::get_if<ExpDiffBasis>(&spec.basis)) s += "(" + num(e->beta) + "," + num(e->lambda) + ")";
    s += ";phases=";
    s += std::visit(overloaded{
                        [](const SteinhausPhases& p) { return "steinhaus(" + std::to_string(p.seed) + ")"; },
                        [](const EquidistributedPhases& p) { return "equidistributed(" + num(p.alpha) + ")"; },
                        [](const ZeroPhases&) { return std::string("zero"); },
                    },
                    spec.phases);
    s += ";scale=" + num(spec.freq_scale);
    s += spec.form == SeriesForm::OneSided ? ";form=one_sided"
         : spec.form == SeriesForm::TwoSided ? ";form=two_sided"
                                             : ";form=vortex";
    return s;
}

std::uint64_t spec_hash(const SeriesSpec& spec) { return fnv1a(canonical_string(spec)); }

int codomain_dim(const SeriesSpec& spec) {
    if (spec.form == SeriesForm::Vortex) return 2;
    return basis_info(spec.basis).codomain_dim;
}

namespace presets {

SeriesSpec weierstrass(double beta, double lambda, PhaseModel phases) {
    return {GeometricCoefficients{beta, lambda}, GeometricFrequency{lambda}, ExpBasis{}, phases, lambda,
            SeriesForm::OneSided};
}
SeriesSpec riemann(double a, double b, PhaseModel phases) {
    return {PowerCoefficients{b}, PowerFrequency{a}, ExpBasis{}, phases, 1.0, SeriesForm::OneSided};
}
SeriesSpec real_sine(double a, double b, PhaseModel phases) {
    return {PowerCoefficients{b}, PowerFrequency{a}, SineRealBasis{}, phases, 1.0, SeriesForm::OneSided};
}
SeriesSpec weierstrass_mandelbrot(double beta, double lambda, PhaseModel phases) {
    return {GeometricCoefficients{beta, lambda}, GeometricFrequency{lambda}, OneMinusExpBasis{}, phases, lambda,
            SeriesForm::TwoSided};
}
SeriesSpec riemann_vortex(PhaseModel phases) {
    return {PowerCoefficients{2.0}, PowerFrequency{2.0}, OneMinusExpBasis{}, phases, 1.0, SeriesForm::Vortex};
}
SeriesSpec expdiff(double beta, double lambda, PhaseModel phases) {
    return {GeometricCoefficients{beta, lambda}, GeometricFrequency{lambda}, ExpDiffBasis{beta, lambda}, phases, lambda,
            SeriesForm::OneSided};
}
SeriesSpec takagi(double beta, double lambda, PhaseModel phases) {
    return {GeometricCoefficients{beta, lambda}, GeometricFrequency{lambda}, TakagiSineBasis{}, phases, lambda,
            SeriesForm::OneSided};
}
SeriesSpec dyadic_tau_zero(PhaseModel phases) {
    return {PowerCoefficients{2.0}, GeometricFrequency{2.0}, ExpBasis{}, phases, 2.0, SeriesForm::OneSided};
}

}  // namespace presets

void validate(const TestSet& set) {
    std::visit(overloaded{
                   [](const IntervalSet& s) {
                       if (!(s.hi > s.lo) || !std::isfinite(s.lo) || !std::isfinite(s.hi))
                           throw ValidationError("interval needs finite lo < hi");
                       if (s.points < 1 || s.points > (std::int64_t{1} << 28))
                           throw ValidationError("interval point count must lie in [1, 2^28]");
                   },
                   [](const CantorSet& c) {
                       if (!(c.ratio > 0.0 && c.ratio < 0.5)) throw ValidationError("cantor ratio must lie in (0, 1/2)");
                       if (c.level < 0 || c.level > kCantorMaxLevel)
                           throw ValidationError("cantor level must lie in [0, 24]");
                   },
               },
               set);
}

double hausdorff_dim(const TestSet& set) {
    if (const auto* c = std::get_if<CantorSet>(&set)) return std::log(2.0) / std::log(1.0 / c->ratio);
    return 1.0;
}

std::vector<double> cantor_points(double r, int m) {
    validate(TestSet{CantorSet{r, m}});
    const std::size_t count = std::size_t{1} << m;
    std::vector<long double> step(static_cast<std::size_t>(m));
    long double scale = 1.0L;
    for (int i = 0; i < m; ++i) {
        step[static_cast<std::size_t>(i)] = (1.0L - r) * scale;
        scale *= r;
    }
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        long double x = 0.0L;
        for (int i = 0; i < m; ++i)
            if ((j >> (m - 1 - i)) & 1U) x += step[static_cast<std::size_t>(i)];
        out[j] = static_cast<double>(x);
    }
    return out;
}

std::vector<double> materialize(const TestSet& set) {
    validate(set);
    if (const auto* c = std::get_if<CantorSet>(&set)) return cantor_points(c->ratio, c->level);
    const auto& s = std::get<IntervalSet>(set);
    std::vector<double> xs(static_cast<std::size_t>(s.points));
    const double w = s.hi - s.lo;
    for (std::int64_t j = 0; j < s.points; ++j)
        xs[static_cast<std::size_t>(j)] = s.lo + w * static_cast<double>(j) / static_cast<double>(s.points);
    return xs;
}

namespace {

std::vector<double> steinhaus_stream(std::uint64_t seed, std::uint64_t stream, std::uint32_t tag, std::int64_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), tag};
    std::mt19937_64 gen(seq);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& v : out) v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return out;
}

double frac_ld(long double v) {
    const long double f = v - std::floor(v);
    return f >= 1.0L ? 0.0 : static_cast<double>(f);
}

}  // namespace

std::vector<double> draw_phases(const PhaseModel& model, std::int64_t count, std::uint64_t stream_id) {
    if (count < 0) throw ValidationError("phase count must be >= 0");
    return std::visit(overloaded{
                          [&](const SteinhausPhases& p) { return steinhaus_stream(p.seed, stream_id, 0, count); },
                          [&](const EquidistributedPhases& p) {
                              std::vector<double> out(static_cast<std::size_t>(count));
                              for (std::int64_t n = 1; n <= count; ++n)
                                  out[static_cast<std::size_t>(n - 1)] =
                                      frac_ld(static_cast<long double>(n) * static_cast<long double>(p.alpha));
                              return out;
                          },
                          [&](const ZeroPhases&) { return std::vector<double>(static_cast<std::size_t>(count), 0.0); },
                      },
                      model);
}

std::vector<double> draw_phases_low(const PhaseModel& model, std::int64_t count, std::uint64_t stream_id) {
    if (count < 0) throw ValidationError("phase count must be >= 0");
    return std::visit(overloaded{
                          [&](const SteinhausPhases& p) { return steinhaus_stream(p.seed, stream_id, 1, count); },
                          [&](const EquidistributedPhases& p) {
                              std::vector<double> out(static_cast<std::size_t>(count));
                              for (std::int64_t n = 0; n < count; ++n)
                                  out[static_cast<std::size_t>(n)] =
                                      frac_ld(-static_cast<long double>(n) * static_cast<long double>(p.alpha));
                              return out;
                          },
                          [&](const ZeroPhases&) { return std::vector<double>(static_cast<std::size_t>(count), 0.0); },
                      },
                      model);
}

double high_tail_bound(const SeriesSpec& spec, std::int64_t N) {
    const double sup = basis_info(spec.basis).sup_norm;
    const double tail = l1_tail(spec.coeffs, spec.freqs, N) * sup;
    return spec.form == SeriesForm::Vortex ? tail * 2.0 * kVortexScale : tail;
}

namespace {

template <class Pred>
std::int64_t smallest_passing(Pred ok, const char* what) {
    if (ok(0)) return 0;
    std::int64_t hi = 1;
    while (!ok(hi)) {
        if (hi >= kMaxTerms) throw TruncationError(std::string(what) + ": tolerance unreachable within 10^7 terms");
        hi = std::min(hi * 2, kMaxTerms);
    }
    std::int64_t lo = hi / 2;  // fails (or is 0, which failed above)
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

double low_tail_bound(const SeriesSpec& spec, std::int64_t M, double x_abs_max) {
    const auto& g = std::get<GeometricCoefficients>(spec.coeffs);
    const double r = std::pow(g.lambda, -(1.0 - g.beta));
    const double L = basis_info(spec.basis).global_lipschitz;
    return L * x_abs_max * std::pow(r, static_cast<double>(M + 1)) / (1.0 - r);
}

}  // namespace

Truncation truncation_plan(const SeriesSpec& spec, double eps_tail, double x_abs_max) {
    if (!(eps_tail > 0.0)) throw ValidationError("eps_tail must be > 0");
    validate(spec);
    const bool two = spec.form == SeriesForm::TwoSided;
    const double target = (two ? 0.5 * eps_tail : eps_tail) * (1.0 + 1e-12);
    Truncation t;
    t.N = smallest_passing([&](std::int64_t N) { return high_tail_bound(spec, N) <= target; }, "truncation_index");
    t.tail_high = high_tail_bound(spec, t.N);
    if (two) {
        t.M = smallest_passing([&](std::int64_t M) { return low_tail_bound(spec, M, x_abs_max) <= target; },
                               "truncation_index (negative side)");
        t.tail_low = low_tail_bound(spec, t.M, x_abs_max);
    }
    return t;
}

std::int64_t truncation_index(const SeriesSpec& spec, double eps_tail) { return truncation_plan(spec, eps_tail).N; }

PreparedSeries::PreparedSeries(const SeriesSpec& spec, std::int64_t N, std::int64_t M) : spec_(spec) {
    validate(spec_);
    if (N < 0 || M < 0) throw ValidationError("term counts must be >= 0");
    if (N > kMaxTerms || M > kMaxTerms) throw TruncationError("term count exceeds the 10^7 cap");
    if (auto lim = term_limit(spec_.freqs); lim && N > *lim) N = *lim;
    if (spec_.form != SeriesForm::TwoSided) M = 0;
    terms_.resize(static_cast<std::size_t>(N));

    const auto* ed = std::get_if<ExpDiffBasis>(&spec_.basis);
    DoubleDouble geo{spec_.freq_scale, 0.0};
    for (std::int64_t n = 1; n <= N; ++n) {
        Term& t = terms_[static_cast<std::size_t>(n - 1)];
        t.a = coefficient_at(spec_.coeffs, spec_.freqs, n);
        DoubleDouble f;
        if (const auto* g = std::get_if<GeometricFrequency>(&spec_.freqs)) {
            if (n > 1) geo = dd_mul(geo, g->lambda);
            f = geo;
        } else if (const auto* p = std::get_if<PowerFrequency>(&spec_.freqs)) {
            if (is_integer(p->exponent) && p->exponent <= 16.0) {
                f = DoubleDouble{1.0, 0.0};
                for (int i = 0; i < static_cast<int>(p->exponent); ++i) f = dd_mul(f, static_cast<double>(n));
            } else {
                f = dd_from_long_double(lambda_at(spec_.freqs, n));
            }
            f = dd_mul(f, spec_.freq_scale);
        } else {
            f = dd_mul(DoubleDouble{static_cast<double>(lambda_at(spec_.freqs, n)), 0.0}, spec_.freq_scale);
        }
        if (!std::isfinite(f.hi)) throw TruncationError("frequency overflow at term " + std::to_string(n));
        t.freq = f;
        if (ed) t.freq2 = dd_mul(f, ed->lambda);
    }
    if (M > 0) {
        const auto& g = std::get<GeometricCoefficients>(spec_.coeffs);
        low_.resize(static_cast<std::size_t>(M));
        for (std::int64_t n = 1; n <= M; ++n) {
            LowTerm& t = low_[static_cast<std::size_t>(n - 1)];
            t.a = std::pow(g.lambda, g.beta * static_cast<double>(n));
            t.freq = std::pow(static_cast<long double>(g.lambda), -static_cast<long double>(n));
        }
    }
    set_phases(0);
}

void PreparedSeries::set_phases(std::uint64_t stream_id) {
    const std::int64_t low_count =
        spec_.form == SeriesForm::OneSided ? 0 : (spec_.form == SeriesForm::Vortex ? N() + 1 : M() + 1);
    const auto high = draw_phases(spec_.phases, N(), stream_id);
    const auto low = draw_phases_low(spec_.phases, low_count, stream_id);
    set_phases(high, low);
}

void PreparedSeries::set_phases(std::span<const double> high, std::span<const double> low) {
    if (high.size() < terms_.size()) throw ValidationError("too few positive-side phases");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        Term& t = terms_[i];
        const cplx X = expi_turns(high[i]);
        if (spec_.form == SeriesForm::Vortex) {
            if (low.size() < terms_.size() + 1) throw ValidationError("too few negative-side phases");
            t.weight = t.a * kVortexScale * (X + expi_turns(low[i + 1]));
        } else {
            t.weight = t.a * X;
        }
    }
    if (spec_.form != SeriesForm::OneSided) {
        if (low.empty()) throw ValidationError("missing zero-index phase");
        zero_weight_ = expi_turns(low[0]);
    }
    for (std::size_t i = 0; i < low_.size(); ++i) {
        if (low.size() < low_.size() + 1) throw ValidationError("too few negative-side phases");
        low_[i].weight = low_[i].a * expi_turns(low[i + 1]);
    }
}

cplx PreparedSeries::basis_at(const Term& t, double x) const {
    const double ft = frac_product(t.freq, x);
    const double flt = std::holds_alternative<ExpDiffBasis>(spec_.basis) ? frac_product(t.freq2, x) : 0.0;
    return eval_basis_reduced(spec_.basis, ft, flt);
}

cplx PreparedSeries::basis_at(const Term& t, DoubleDouble x) const {
    const double ft = frac_product(t.freq, x);
    const double flt = std::holds_alternative<ExpDiffBasis>(spec_.basis) ? frac_product(t.freq2, x) : 0.0;
    return eval_basis_reduced(spec_.basis, ft, flt);
}

cplx PreparedSeries::value(double x) const {
    ComplexSum acc;
    if (spec_.form == SeriesForm::Vortex) {
        const DoubleDouble u = dd_mul(kTwoPiDD, -x);
        for (const Term& t : terms_) acc.add(t.weight * basis_at(t, u));
        acc.add(cplx{0.0, x} * zero_weight_);
        return acc.value();
    }
    if (std::holds_alternative<SineRealBasis>(spec_.basis)) {
        for (const Term& t : terms_) acc.add(cplx{(t.weight * expi_turns(frac_product(t.freq, x))).imag(), 0.0});
        return acc.value();
    }
    if (spec_.form == SeriesForm::TwoSided) {
        for (auto it = low_.rbegin(); it != low_.rend(); ++it) {
            const long double arg = it->freq * static_cast<long double>(x);
            const double ft = frac_ld(arg);
            acc.add(it->weight * eval_basis_reduced(spec_.basis, ft, 0.0));
        }
        acc.add(zero_weight_ * eval_basis(spec_.basis, x));
    }
    for (const Term& t : terms_) acc.add(t.weight * basis_at(t, x));
    return acc.value();
}

std::vector<cplx> PreparedSeries::basis_row(double x) const {
    if (spec_.form != SeriesForm::OneSided) throw ValidationError("basis rows exist for one-sided series only");
    std::vector<cplx> row;
    row.reserve(terms_.size());
    const bool sine = std::holds_alternative<SineRealBasis>(spec_.basis);
    for (const Term& t : terms_) row.push_back(sine ? expi_turns(frac_product(t.freq, x)) : basis_at(t, x));
    return row;
}

cplx PreparedSeries::value_from_row(std::span<const cplx> row) const {
    ComplexSum acc;
    if (std::holds_alternative<SineRealBasis>(spec_.basis)) {
        for (std::size_t n = 0; n < terms_.size(); ++n) acc.add(cplx{(terms_[n].weight * row[n]).imag(), 0.0});
        return acc.value();
    }
    for (std::size_t n = 0; n < terms_.size(); ++n) acc.add(terms_[n].weight * row[n]);
    return acc.value();
}

double PreparedSeries::increment_modulus(std::size_t n, double x, double y) const {
    const Term& t = terms_.at(n - 1);
    if (std::holds_alternative<SineRealBasis>(spec_.basis))
        return std::abs(expi_turns(frac_product(t.freq, x)) - expi_turns(frac_product(t.freq, y)));
    return std::abs(basis_at(t, x) - basis_at(t, y));
}

bool spectral_eligible(const SeriesSpec& spec, const TestSet& set) {
    if (spec.form != SeriesForm::OneSided) return false;
    const auto* iv = std::get_if<IntervalSet>(&set);
    if (!iv) return false;
    const auto M = iv->points;
    if (M < 2 || (M & (M - 1)) != 0 || M > (std::int64_t{1} << 26)) return false;
    const double w = iv->hi - iv->lo;
    if (!is_integer(iv->lo) || !is_integer(w) || w < 1.0 || w >= 1073741824.0) return false;
    if (!integral_frequencies(spec.freqs) || !is_integer(spec.freq_scale)) return false;
    if (const auto* e = std::get_if<ExpDiffBasis>(&spec.basis)) return is_integer(e->lambda);
    return !std::holds_alternative<TakagiSineBasis>(spec.basis);
}

namespace {

std::int64_t residue(DoubleDouble f, std::int64_t M) {
    const double md = static_cast<double>(M);
    double r = std::fmod(f.hi, md) + std::fmod(f.lo, md);
    r = std::fmod(r, md);
    if (r < 0) r += md;
    return static_cast<std::int64_t>(r);
}

void eval_spectral(const PreparedSeries& ps, const IntervalSet& iv, std::vector<cplx>& out) {
    const std::int64_t M = iv.points;
    const auto w = static_cast<std::int64_t>(iv.hi - iv.lo);
    const BasisFunction& b = ps.spec().basis;
    const auto* ed = std::get_if<ExpDiffBasis>(&b);
    const double damp = ed ? std::pow(ed->lambda, -ed->beta) : 0.0;

    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(M));
    if (!buf) throw Error("fftw allocation failed");
    for (std::int64_t j = 0; j < M; ++j) buf[j][0] = buf[j][1] = 0.0;
    ComplexSum total;
    auto bin = [&](DoubleDouble f, cplx c) {
        const std::int64_t k = residue(f, M) * w % M;
        buf[k][0] += c.real();
        buf[k][1] += c.imag();
    };
    for (const auto& t : ps.terms()) {
        bin(t.freq, t.weight);
        if (ed) bin(t.freq2, -damp * t.weight);
        total.add(t.weight);
    }
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(M), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    const cplx sum = total.value();
    const bool one_minus = std::holds_alternative<OneMinusExpBasis>(b);
    const bool sine = std::holds_alternative<SineRealBasis>(b);
    out.resize(static_cast<std::size_t>(M));
    for (std::int64_t j = 0; j < M; ++j) {
        const cplx v{buf[j][0], buf[j][1]};
        out[static_cast<std::size_t>(j)] = sine ? cplx{v.imag(), 0.0} : one_minus ? sum - v : v;
    }
    fftw_free(buf);
}

double max_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::fabs(x));
    return m;
}

SampledCurve prepare_curve(const SeriesSpec& spec, std::span<const double> xs, double eps_tail,
                           std::uint64_t stream_id, const EvalOptions& opts, Truncation& plan) {
    if (!(eps_tail > 0.0)) throw ValidationError("eps_tail must be > 0");
    validate(spec);
    plan = truncation_plan(spec, eps_tail, max_abs(xs));
    if (opts.terms) {
        if (*opts.terms < 0) throw ValidationError("term override must be >= 0");
        plan.N = *opts.terms;
        plan.tail_high = high_tail_bound(spec, plan.N);
    }
    SampledCurve c;
    c.truncation_N = plan.N;
    c.truncation_M = plan.M;
    c.tail_bound = plan.tail_bound();
    c.spec_hash = spec_hash(spec);
    if (const auto* s = std::get_if<SteinhausPhases>(&spec.phases)) c.seed = s->seed;
    c.stream_id = stream_id;
    c.codomain_dim = codomain_dim(spec);
    return c;
}

void eval_direct(const PreparedSeries& ps, std::span<const double> xs, std::vector<cplx>& out, int threads) {
    out.resize(xs.size());
    parallel_chunks(xs.size(), static_cast<std::size_t>(std::max(threads, 1)) * 8, threads,
                    [&](std::size_t, std::size_t b, std::size_t e) {
                        for (std::size_t i = b; i < e; ++i) out[i] = ps.value(xs[i]);
                    });
}

}  // namespace

SampledCurve eval_series(const SeriesSpec& spec, const TestSet& set, double eps_tail, std::uint64_t stream_id,
                         const EvalOptions& opts) {
    validate(set);
    std::vector<double> xs = materialize(set);
    Truncation plan;
    SampledCurve c = prepare_curve(spec, xs, eps_tail, stream_id, opts, plan);
    PreparedSeries ps(spec, plan.N, plan.M);
    ps.set_phases(stream_id);
    const bool eligible = spectral_eligible(spec, set);
    bool spectral = false;
    if (opts.path == EvalPath::Spectral) {
        if (!eligible) throw ValidationError("spectral path requested for an ineligible series or test set");
        spectral = true;
    } else if (opts.path == EvalPath::Auto) {
        spectral = eligible && plan.N > 64;
    }
    if (spectral)
        eval_spectral(ps, std::get<IntervalSet>(set), c.values);
    else
        eval_direct(ps, xs, c.values, opts.threads);
    c.path_used = spectral ? EvalPath::Spectral : EvalPath::Direct;
    c.xs = std::move(xs);
    return c;
}

SampledCurve eval_series_at(const SeriesSpec& spec, std::span<const double> xs, double eps_tail,
                            std::uint64_t stream_id, const EvalOptions& opts) {
    if (opts.path == EvalPath::Spectral) throw ValidationError("spectral path needs a dyadic interval test set");
    Truncation plan;
    SampledCurve c = prepare_curve(spec, xs, eps_tail, stream_id, opts, plan);
    PreparedSeries ps(spec, plan.N, plan.M);
    ps.set_phases(stream_id);
    eval_direct(ps, xs, c.values, opts.threads);
    c.xs.assign(xs.begin(), xs.end());
    return c;
}

PointCloud image_points(const SampledCurve& curve) {
    PointCloud pc;
    pc.dim = 2;
    pc.coords.reserve(curve.values.size() * 2);
    for (const cplx& v : curve.values) pc.push(v.real(), v.imag());
    return pc;
}

PointCloud graph_points(const SampledCurve& curve, double value_scale) {
    PointCloud pc;
    pc.dim = curve.codomain_dim + 1;
    pc.coords.reserve(curve.values.size() * static_cast<std::size_t>(pc.dim));
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        const cplx v = curve.values[i] * value_scale;
        if (pc.dim == 2)
            pc.push(curve.xs[i], v.real());
        else
            pc.push(curve.xs[i], v.real(), v.imag());
    }
    return pc;
}

PointCloud eval_graph(const SeriesSpec& spec, const TestSet& set, double eps_tail, std::uint64_t stream_id,
                      const EvalOptions& opts) {
    return graph_points(eval_series(spec, set, eps_tail, stream_id, opts));
}

double graph_value_scale(const SeriesSpec& spec) {
    if (spec.form != SeriesForm::OneSided) return 1.0;
    const double total = l1_tail(spec.coeffs, spec.freqs, 0) * basis_info(spec.basis).sup_norm;
    return total > 0.0 ? 1.0 / (2.0 * total) : 1.0;
}

}  // namespace lacuna
