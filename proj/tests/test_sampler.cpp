#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lacuna/sampler.hpp"

using namespace lacuna;

namespace {

double max_abs_diff(const SampledCurve& a, const SampledCurve& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

bool bit_identical(const SampledCurve& a, const SampledCurve& b) {
    if (a.values.size() != b.values.size() || a.xs != b.xs) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (a.values[i].real() != b.values[i].real() || a.values[i].imag() != b.values[i].imag()) return false;
    return true;
}

}  // namespace

TEST_CASE("truncation_index examples") {
    CHECK(truncation_index(presets::weierstrass(1.0, 2.0), std::ldexp(1.0, -20)) == 20);
    CHECK(truncation_index(presets::riemann(2.0, 2.0), 1e-4) == 10000);
    // Smallest N with 6^{-0.5(N+1)} / (1 - 6^{-0.5}) <= 1e-9, by direct search.
    std::int64_t want = 0;
    while (std::pow(6.0L, -0.5L * (want + 1)) / (1.0L - std::pow(6.0L, -0.5L)) > 1e-9L) ++want;
    CHECK(truncation_index(presets::weierstrass(0.5, 6.0), 1e-9) == want);
}

TEST_CASE("truncation plan certifies both sides and caps the term count") {
    const Truncation t = truncation_plan(presets::weierstrass_mandelbrot(0.5, 3.0), 1e-8, 2.0);
    CHECK(t.M > 0);
    CHECK(t.tail_bound() <= 1e-8);
    CHECK_THROWS_AS(truncation_plan(presets::riemann(2.0, 1.01), 1e-9), TruncationError);
    CHECK_THROWS_AS(truncation_plan(presets::riemann(2.0, 2.0), 0.0), ValidationError);
}

TEST_CASE("draw_phases examples") {
    CHECK(draw_phases(ZeroPhases{}, 3, 0) == std::vector<double>{0.0, 0.0, 0.0});
    const auto e = draw_phases(EquidistributedPhases{kPi}, 2, 0);
    CHECK(e[0] == doctest::Approx(kPi - 3.0).epsilon(1e-15));
    CHECK(e[1] == doctest::Approx(2.0 * kPi - 6.0).epsilon(1e-15));
    CHECK(draw_phases(SteinhausPhases{9}, 100, 4) == draw_phases(SteinhausPhases{9}, 100, 4));
    CHECK(draw_phases(SteinhausPhases{9}, 100, 4) != draw_phases(SteinhausPhases{9}, 100, 5));
    CHECK(draw_phases(SteinhausPhases{9}, 100, 4) != draw_phases_low(SteinhausPhases{9}, 100, 4));
    CHECK(draw_phases(SteinhausPhases{1}, 0, 0).empty());
}

TEST_CASE("Steinhaus phases pass a Kolmogorov-Smirnov test at 1%") {
    for (std::uint64_t stream : {0, 1, 77}) {
        auto v = draw_phases(SteinhausPhases{12345}, 10000, stream);
        std::sort(v.begin(), v.end());
        double d = 0.0;
        const double n = static_cast<double>(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i] >= 0.0);
            CHECK(v[i] < 1.0);
            d = std::max({d, (i + 1) / n - v[i], v[i] - i / n});
        }
        // Asymptotic 1% critical value 1.628 / sqrt(n).
        CHECK(d < 1.628 / std::sqrt(n));
    }
}

TEST_CASE("eval_series: zero-phase Weierstrass at the origin") {
    const std::vector<double> xs{0.0};
    const SampledCurve c = eval_series_at(presets::weierstrass(1.0, 2.0, ZeroPhases{}), xs, 1e-12, 0);
    CHECK(std::abs(c.values[0] - cplx{1.0, 0.0}) <= c.tail_bound + 1e-15);
}

TEST_CASE("eval_series: ExpDiff telescopes to a single exponential") {
    for (EvalPath path : {EvalPath::Direct, EvalPath::Spectral}) {
        const double beta = 0.3, lambda = 6.0;
        EvalOptions opts;
        opts.path = path;
        const SampledCurve c =
            eval_series(presets::expdiff(beta, lambda, ZeroPhases{}), IntervalSet{0.0, 1.0, 1024}, 1e-10, 0, opts);
        for (std::size_t i = 0; i < c.xs.size(); ++i) {
            const cplx want = std::pow(lambda, -beta) * std::polar(1.0, kTwoPi * lambda * c.xs[i]);
            CHECK(std::abs(c.values[i] - want) <= c.tail_bound + 1e-13);
        }
    }
}

TEST_CASE("Weierstrass-Mandelbrot scaling identity") {
    const double beta = 0.5, lambda = 3.0;
    const SeriesSpec s = presets::weierstrass_mandelbrot(beta, lambda, ZeroPhases{});
    std::vector<double> xs, lxs;
    // Dyadic grid keeps λx exact.
    for (int i = 0; i < 1000; ++i) {
        xs.push_back(i / 1024.0);
        lxs.push_back(lambda * xs.back());
    }
    const SampledCurve a = eval_series_at(s, xs, 1e-10, 0);
    const SampledCurve b = eval_series_at(s, lxs, 1e-10, 0);
    const double lb = std::pow(lambda, beta);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(std::abs(b.values[i] - lb * a.values[i]) <= b.tail_bound + lb * a.tail_bound + 1e-12);
}

TEST_CASE("randomised vortex with zero phases") {
    const SeriesSpec s = presets::riemann_vortex(ZeroPhases{});
    std::vector<double> ts;
    for (int i = 0; i < 50; ++i) ts.push_back(-0.3 + i * 0.0123);
    const SampledCurve c = eval_series_at(s, ts, 1e-6, 0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        // -R(u)/(2π²) + it + 1/12 with R(u) = Σ n^-2 e^{2πi n² u}, u = -2πt, summed to 10^6 terms.
        const long double u = -2.0L * std::numbers::pi_v<long double> * ts[i];
        std::complex<long double> R = 0.0L;
        for (long n = 1000000; n >= 1; --n) {
            const long double ph = std::fmod(static_cast<long double>(n) * n * u, 1.0L);
            R += std::polar(1.0L / (static_cast<long double>(n) * n), 2.0L * std::numbers::pi_v<long double> * ph);
        }
        const long double pi2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double>;
        const std::complex<long double> want = -R / (2.0L * pi2) + std::complex<long double>(1.0L / 12.0L, ts[i]);
        const cplx w(static_cast<double>(want.real()), static_cast<double>(want.imag()));
        CHECK(std::abs(c.values[i] - w) <= c.tail_bound + 1e-6 / (2.0 * kPi * kPi) + 1e-12);
    }
}

TEST_CASE("tail certification against a ten-times longer sum") {
    const std::vector<SeriesSpec> specs{presets::weierstrass(0.5, 6.0), presets::riemann(2.0, 2.0),
                                        presets::takagi(0.6, 2.0), presets::real_sine(2.0, 2.0),
                                        presets::expdiff(0.3, 6.0)};
    const double eps[] = {1e-6, 1e-3, 1e-6, 1e-3, 1e-6};
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const IntervalSet set{0.0, 1.0, 512};
        EvalOptions d;
        d.path = EvalPath::Direct;
        const SampledCurve c = eval_series(specs[k], set, eps[k], 3, d);
        EvalOptions longer = d;
        longer.terms = 10 * c.truncation_N;
        const SampledCurve o = eval_series(specs[k], set, eps[k], 3, longer);
        CHECK(c.tail_bound <= eps[k]);
        CHECK(max_abs_diff(c, o) <= c.tail_bound);
    }
}

TEST_CASE("spectral and direct paths agree") {
    for (const SeriesSpec& s : {presets::riemann(2.0, 2.0), presets::weierstrass(0.4, 2.0),
                                presets::real_sine(3.0, 2.0), presets::dyadic_tau_zero()}) {
        const IntervalSet set{0.0, 1.0, 4096};
        EvalOptions d, f;
        d.path = EvalPath::Direct;
        f.path = EvalPath::Spectral;
        REQUIRE(spectral_eligible(s, set));
        const SampledCurve a = eval_series(s, set, 1e-3, 2, d);
        const SampledCurve b = eval_series(s, set, 1e-3, 2, f);
        CHECK(a.truncation_N == b.truncation_N);
        CHECK(max_abs_diff(a, b) < 1e-11);
        CHECK(b.path_used == EvalPath::Spectral);
    }
    CHECK_FALSE(spectral_eligible(presets::weierstrass(0.7, 6.5), IntervalSet{0.0, 1.0, 4096}));
    CHECK_FALSE(spectral_eligible(presets::riemann(2.0, 2.0), IntervalSet{0.0, 1.0, 1000}));
}

TEST_CASE("evaluation is bit-identical across thread counts") {
    for (EvalPath path : {EvalPath::Direct, EvalPath::Spectral}) {
        EvalOptions o1, o4, o16;
        o1.path = o4.path = o16.path = path;
        o4.threads = 4;
        o16.threads = 16;
        const SeriesSpec s = presets::riemann(2.0, 2.0, SteinhausPhases{42});
        const IntervalSet set{0.0, 1.0, 8192};
        const SampledCurve a = eval_series(s, set, 1e-3, 1, o1);
        CHECK(bit_identical(a, eval_series(s, set, 1e-3, 1, o4)));
        CHECK(bit_identical(a, eval_series(s, set, 1e-3, 1, o16)));
    }
}

TEST_CASE("cached basis rows reproduce value exactly") {
    for (const SeriesSpec& spec : {presets::weierstrass(0.7, 6.0, SteinhausPhases{2}), presets::real_sine(2.0, 2.0),
                                   presets::takagi(0.6, 2.0, SteinhausPhases{4})}) {
        PreparedSeries ps(spec, 50);
        ps.set_phases(3);
        for (double x : {0.0, 0.123, 0.5, 0.999}) {
            const auto row = ps.basis_row(x);
            CHECK(ps.value_from_row(row) == ps.value(x));
        }
    }
    CHECK_THROWS_AS(PreparedSeries(presets::weierstrass_mandelbrot(0.5, 3.0), 10, 10).basis_row(0.1), ValidationError);
}

TEST_CASE("modulus bound holds for every phase draw") {
    const SeriesSpec s = presets::weierstrass(0.7, 6.0);
    const double bound = l1_tail(s.coeffs, 0) * basis_info(s.basis).sup_norm;
    for (std::uint64_t stream = 0; stream < 5; ++stream) {
        const SampledCurve c = eval_series(s, IntervalSet{0.0, 1.0, 1 << 16}, 1e-8, stream);
        CHECK(c.values.size() == (1u << 16));
        for (const cplx& v : c.values) CHECK(std::abs(v) <= bound * (1 + 1e-12));
    }
}

TEST_CASE("eval_graph shapes") {
    const PointCloud g = eval_graph(presets::real_sine(2.0, 2.0), IntervalSet{0.0, 1.0, 4096}, 1e-3, 0);
    CHECK(g.dim == 2);
    CHECK(g.size() == 4096);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::fabs(g.point(i)[1]) <= kPi * kPi / 6.0);
    SeriesSpec zero = presets::weierstrass(0.5, 2.0);
    zero.coeffs = ExplicitCoefficients{{0.0}};
    const PointCloud z = eval_graph(zero, IntervalSet{0.0, 1.0, 64}, 1e-3, 0);
    CHECK(z.dim == 3);
    for (std::size_t i = 0; i < z.size(); ++i) {
        CHECK(z.point(i)[1] == 0.0);
        CHECK(z.point(i)[2] == 0.0);
    }
}

TEST_CASE("cantor points") {
    const auto c1 = cantor_points(1.0 / 3.0, 1);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0] == 0.0);
    CHECK(c1[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    const auto c2 = cantor_points(1.0 / 3.0, 2);
    const std::vector<double> want{0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0};
    REQUIRE(c2.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(c2[i] == doctest::Approx(want[i]).epsilon(1e-15));
    CHECK(hausdorff_dim(CantorSet{1.0 / 3.0, 5}) == doctest::Approx(std::log(2.0) / std::log(3.0)));
    CHECK(hausdorff_dim(IntervalSet{}) == 1.0);
    CHECK(cantor_points(0.25, 10).size() == 1024);
    CHECK_THROWS_AS(validate(TestSet{CantorSet{1.0 / 3.0, kCantorMaxLevel + 1}}), ValidationError);
    CHECK_THROWS_AS(validate(TestSet{CantorSet{0.5, 3}}), ValidationError);
}

TEST_CASE("series validation and hashing") {
    CHECK(spec_hash(presets::riemann(2.0, 2.0)) == spec_hash(presets::riemann(2.0, 2.0)));
    CHECK(spec_hash(presets::riemann(2.0, 2.0)) != spec_hash(presets::riemann(3.0, 2.0)));
    SeriesSpec bad = presets::weierstrass_mandelbrot(0.5, 3.0);
    bad.basis = ExpBasis{};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad = presets::weierstrass_mandelbrot(1.2, 3.0);
    CHECK_THROWS_AS(validate(bad), ValidationError);
    CHECK(codomain_dim(presets::real_sine(2.0, 2.0)) == 1);
    CHECK(codomain_dim(presets::riemann(2.0, 2.0)) == 2);
}
