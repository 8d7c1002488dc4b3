#include <doctest.h>

#include <cmath>

#include "lacuna/numeric.hpp"
#include "lacuna/oracle.hpp"

using namespace lacuna;

TEST_CASE("image examples") {
    const DimInterval w = predict_image(0.7, 0.7, 1.0, 2);
    CHECK(w.lo == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
    CHECK(w.hi == w.lo);
    const RiemannExponents r = riemann_exponents(2.0, 2.0);
    const DimInterval ri = predict_image(r.sigma, r.tau, 1.0, 2);
    CHECK(ri.lo == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(ri.hi == ri.lo);
    const DimInterval z = predict_image(0.5, 0.5, 0.0, 2);
    CHECK(z.lo == 0.0);
    CHECK(z.hi == 0.0);
    CHECK(predict_image(0.0, 0.0, 0.3, 2).lo == 2.0);
    CHECK(predict_image(0.0, 0.0, 0.0, 2).lo == 0.0);
    CHECK(predict_image(0.3, 0.3, 1.0, 1).lo == 1.0);
    CHECK(predict_image(0.2, 1.5, 1.0, 2).hi == 2.0);
    CHECK(predict_image(1.5, 1.5, 1.0, 2).hi == 1.0);
    CHECK(predict_image(0.5, 0.8, 1.0, 2).lo == doctest::Approx(1.25));
}

TEST_CASE("graph examples") {
    const DimInterval w = predict_graph(0.7, 0.7, 1.0, 2);
    CHECK(w.lo == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
    const RiemannExponents r = riemann_exponents(2.0, 2.0);
    CHECK(predict_graph(r.sigma, r.tau, 1.0, 1).lo == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(predict_graph(0.0, 0.0, 0.5, 2).lo == 2.5);
    CHECK(predict_graph(0.0, 0.0, 0.5, 2).hi == 2.5);
    CHECK(predict_graph(0.3, 0.3, 1.0, 2).lo == doctest::Approx(2.4));
    CHECK_THROWS_AS(predict_graph(0.5, 1.2, 1.0, 2), NotCoveredError);
}

TEST_CASE("classification examples") {
    auto c = classify_measure_interior(0.3, 1.0, 2);
    CHECK(c.first == TriState::YesAlmostSurely);
    CHECK(c.second == TriState::Unknown);
    c = classify_measure_interior(0.75, 1.0, 2);
    CHECK(c.first == TriState::Unknown);
    CHECK(c.second == TriState::Unknown);
    c = classify_measure_interior(0.0, 0.1, 2);
    CHECK(c.first == TriState::YesAlmostSurely);
    CHECK(c.second == TriState::YesAlmostSurely);
    c = classify_measure_interior(0.2, 1.0, 2);
    CHECK(c.second == TriState::YesAlmostSurely);
    c = classify_measure_interior(0.75, 1.0, 1);
    CHECK(c.first == TriState::YesAlmostSurely);
    CHECK(c.second == TriState::Unknown);
    c = classify_measure_interior(0.5, 1.0, 2);
    CHECK(c.first == TriState::Unknown);
    CHECK(to_string(TriState::YesAlmostSurely) == "yes-a.s.");
    CHECK(to_string(TriState::Unknown) == "unknown");
    CHECK(to_string(TriState::No) == "no");
}

TEST_CASE("predict combines the pieces") {
    const Prediction w = predict(0.75, 0.75, 1.0, 2);
    CHECK(w.image_dim_lo == doctest::Approx(4.0 / 3.0));
    CHECK(w.lebesgue_positive == TriState::No);
    CHECK(w.has_interior == TriState::No);
    CHECK(w.graph_covered);
    const Prediction s = predict(0.75, 0.75, 1.0, 1);
    CHECK(s.graph_dim_lo == doctest::Approx(1.25));
    CHECK(s.lebesgue_positive == TriState::YesAlmostSurely);
    const Prediction b = predict(0.5, 0.5, 1.0, 2);
    CHECK(b.lebesgue_positive == TriState::Unknown);
    const Prediction far = predict(1.5, 2.0, 1.0, 2);
    CHECK_FALSE(far.graph_covered);
    REQUIRE(far.graph_partial_lo);
    CHECK(*far.graph_partial_lo == doctest::Approx(0.5));
    CHECK(far.graph_dim_lo <= far.graph_dim_hi);
}

TEST_CASE("riemann exponents") {
    CHECK(riemann_exponents(2.0, 2.0).tau == 0.75);
    CHECK(riemann_exponents(6.0, 2.0).sigma == 0.25);
    CHECK(riemann_exponents(3.0, 2.0).tau == 0.5);
    CHECK(riemann_exponents(2.0, 2.0).dimension_formula_applies);
    CHECK_FALSE(riemann_exponents(1.0, 2.0).dimension_formula_applies);
    CHECK_THROWS_AS(riemann_exponents(2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(riemann_exponents(0.0, 2.0), ValidationError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(predict_image(0.8, 0.7, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(predict_image(0.5, 0.7, 1.5, 2), ValidationError);
    CHECK_THROWS_AS(predict_image(0.5, 0.7, 1.0, 3), ValidationError);
    CHECK_THROWS_AS(predict(-0.1, 0.7, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(graph_additive_branch_smaller(0.0, 1.0), ValidationError);
}

TEST_CASE("ordering and monotonicity over a grid") {
    for (int cd : {1, 2})
        for (int i = 0; i <= 100; i += 5)
            for (int k = i; k <= 100; k += 5)
                for (int j = 0; j <= 100; j += 5) {
                    const double sigma = i / 100.0, tau = k / 100.0, d = j / 100.0;
                    const DimInterval im = predict_image(sigma, tau, d, cd);
                    const DimInterval gr = predict_graph(sigma, tau, d, cd);
                    CHECK(im.lo <= im.hi);
                    CHECK(gr.lo <= gr.hi);
                    CHECK(im.lo <= gr.lo + 1e-15);
                    CHECK(im.hi <= cd);
                    CHECK(gr.hi <= 1 + cd);
                    if (i == k) CHECK(im.lo == im.hi);
                    if (j < 100) CHECK(predict_image(sigma, tau, d + 0.05, cd).lo >= im.lo);
                    if (j < 100) CHECK(predict_graph(sigma, tau, d + 0.05, cd).lo >= gr.lo);
                    if (k < 100) CHECK(predict_image(sigma, tau + 0.05, d, cd).lo <= im.lo);
                    if (k < 100) CHECK(predict_graph(sigma, tau + 0.05, d, cd).lo <= gr.lo);
                }
}

TEST_CASE("graph crossover scan on the 0.01 grid") {
    int mismatches = 0, additive = 0;
    for (int i = 1; i <= 300; ++i)
        for (int j = 0; j <= 100; ++j) {
            // dimA + 2 - 2τ < dimA/τ with τ = i/100, dimA = j/100, scaled by 100·i.
            const bool exact = (j + 200 - 2 * i) * i < 100 * j;
            const bool stated = i > 100 || 2 * i < j;
            const bool got = graph_additive_branch_smaller(i / 100.0, j / 100.0);
            if (exact != stated || got != exact) ++mismatches;
            if (i <= 100 && exact) {
                ++additive;
                const double lo = predict_graph(i / 100.0, i / 100.0, j / 100.0, 2).lo;
                CHECK(lo == doctest::Approx(j / 100.0 + 2.0 - 2.0 * i / 100.0).epsilon(1e-14));
            }
        }
    CHECK(mismatches == 0);
    CHECK(additive > 0);
}
