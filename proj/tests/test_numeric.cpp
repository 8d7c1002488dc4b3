#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "lacuna/numeric.hpp"
#include "lacuna/parallel.hpp"

using namespace lacuna;

namespace {

// frac(f * x) for integer f < 2^63 and a double x in [0, 1), by exact integer arithmetic.
double exact_frac_product(std::uint64_t f, double x) {
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
    const auto mant = static_cast<unsigned __int128>(std::ldexp(m, 53));
    const int shift = 53 - e;  // x = mant / 2^shift
    REQUIRE(shift < 120);
    const unsigned __int128 prod = mant * f;
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << shift) - 1;
    const unsigned __int128 rem = prod & mask;
    return static_cast<double>(static_cast<long double>(rem) / std::ldexp(1.0L, shift));
}

}  // namespace

TEST_CASE("neumaier sum recovers cancelled small terms") {
    NeumaierSum s;
    for (double x : {1.0, 1e100, 1.0, -1e100}) s.add(x);
    CHECK(s.value() == 2.0);
}

TEST_CASE("two_sum and two_prod are error-free") {
    const DoubleDouble s = two_sum(1.0, 1e-17);
    CHECK(s.hi == 1.0);
    CHECK(s.lo == 1e-17);
    const double a = 1.0 + std::ldexp(1.0, -30), b = 1.0 - std::ldexp(1.0, -30);
    const DoubleDouble p = two_prod(a, b);
    CHECK(p.hi == 1.0);
    CHECK(p.lo == -std::ldexp(1.0, -60));
}

TEST_CASE("frac_product matches exact integer arithmetic") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uint64_t f = 1;
    for (int k = 0; k < 20; ++k) {
        f *= 6;
        const DoubleDouble fd = dd_from_long_double(static_cast<long double>(f));
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng);
            const double want = exact_frac_product(f, x);
            const double got = frac_product(fd, x);
            const double d = std::fabs(got - want);
            CHECK(std::min(d, 1.0 - d) <= 1e-15);
            CHECK(got >= 0.0);
            CHECK(got < 1.0);
        }
    }
}

TEST_CASE("frac_dd wraps into [0,1)") {
    CHECK(frac_dd({3.0, 0.0}) == 0.0);
    CHECK(frac_dd({-0.25, 0.0}) == 0.75);
    CHECK(frac_dd({5.5, 1e-20}) == doctest::Approx(0.5));
}

TEST_CASE("expi_turns is exact at quarter turns and accurate elsewhere") {
    CHECK(expi_turns(0.0) == cplx{1.0, 0.0});
    CHECK(expi_turns(0.25) == cplx{0.0, 1.0});
    CHECK(expi_turns(0.5) == cplx{-1.0, 0.0});
    CHECK(expi_turns(-0.25) == cplx{0.0, -1.0});
    CHECK(expi_turns(3.0) == cplx{1.0, 0.0});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng);
        const long double ang = 2.0L * std::numbers::pi_v<long double> * t;
        CHECK(std::abs(expi_turns(t) - cplx(static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang)))) <
              4e-16);
    }
}

TEST_CASE("fit_line on exact data") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double v : x) y.push_back(2.5 * v - 1.0);
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.std_error < 1e-12);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(fit_line(one, one), FitError);
}

TEST_CASE("fnv1a reference vectors") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
    for (int threads : {1, 3, 8}) {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 37) throw ValidationError("boom");
                                 }),
                    ValidationError);
    std::atomic<std::size_t> total{0};
    parallel_chunks(101, 7, 3, [&](std::size_t, std::size_t b, std::size_t e) { total += e - b; });
    CHECK(total == 101);
}

TEST_CASE("resolve_threads honours explicit requests and the environment") {
    CHECK(resolve_threads(5) == 5);
    setenv("LACUNA_THREADS", "3", 1);
    CHECK(resolve_threads(0) == 3);
    unsetenv("LACUNA_THREADS");
    CHECK(resolve_threads(0) >= 1);
}
