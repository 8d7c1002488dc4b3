#include "lacuna/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "lacuna/numeric.hpp"

namespace lacuna {

namespace {

void check_common(double sigma, double tau, double dimA, int codomain_dim) {
    if (codomain_dim != 1 && codomain_dim != 2) throw ValidationError("codomain_dim must be 1 or 2");
    if (!(dimA >= 0.0 && dimA <= 1.0)) throw ValidationError("dimA must lie in [0, 1]");
    if (!(sigma >= 0.0) || !std::isfinite(tau)) throw ValidationError("sigma must be >= 0 and tau finite");
    if (sigma > tau) throw ValidationError("sigma must not exceed tau");
}

// min{cd, dimA/e} with e = 0 read as +inf.
double image_bound(double e, double dimA, int cd) {
    if (dimA == 0.0) return 0.0;
    if (e == 0.0) return cd;
    return std::min(static_cast<double>(cd), dimA / e);
}

double graph_bound(double e, double dimA, int cd) {
    if (dimA == 0.0) return 0.0;
    const double additive = dimA + cd * (1.0 - e);
    if (e == 0.0) return additive;
    return std::min(dimA / e, additive);
}

}  // namespace

std::string to_string(TriState t) {
    switch (t) {
        case TriState::YesAlmostSurely: return "yes-a.s.";
        case TriState::Unknown: return "unknown";
        case TriState::No: return "no";
    }
    return "unknown";
}

DimInterval predict_image(double sigma, double tau, double dimA, int codomain_dim) {
    check_common(sigma, tau, dimA, codomain_dim);
    return {image_bound(tau, dimA, codomain_dim), image_bound(std::min(sigma, 1.0), dimA, codomain_dim)};
}

DimInterval predict_graph(double sigma, double tau, double dimA, int codomain_dim) {
    check_common(sigma, tau, dimA, codomain_dim);
    if (tau > 1.0) throw NotCoveredError("graph dimension is not covered for tau > 1");
    return {graph_bound(tau, dimA, codomain_dim), graph_bound(sigma, dimA, codomain_dim)};
}

std::pair<TriState, TriState> classify_measure_interior(double tau, double dimA, int codomain_dim) {
    if (codomain_dim != 1 && codomain_dim != 2) throw ValidationError("codomain_dim must be 1 or 2");
    if (!(dimA >= 0.0 && dimA <= 1.0)) throw ValidationError("dimA must lie in [0, 1]");
    if (!(tau >= 0.0)) throw ValidationError("tau must be >= 0");
    const double m = codomain_dim == 2 ? 2.0 : 1.0;
    const auto yes_if = [](bool b) { return b ? TriState::YesAlmostSurely : TriState::Unknown; };
    if (tau == 0.0 && dimA > 0.0) return {TriState::YesAlmostSurely, TriState::YesAlmostSurely};
    return {yes_if(tau < dimA / m), yes_if(tau < dimA / (2.0 * m))};
}

RiemannExponents riemann_exponents(double a, double b) {
    if (!(a > 0.0) || !(b > 1.0)) throw ValidationError("riemann exponents need a > 0 and b > 1");
    const double e = (2.0 * b - 1.0) / (2.0 * a);
    return {e, e, b <= a + 0.5};
}

bool graph_additive_branch_smaller(double tau, double dimA) {
    if (!(tau > 0.0)) throw ValidationError("tau must be > 0");
    return (1.0 - tau) * (dimA - 2.0 * tau) > 0.0;
}

Prediction predict(double sigma, double tau, double dimA, int codomain_dim) {
    check_common(sigma, tau, dimA, codomain_dim);
    Prediction p;
    p.codomain_dim = codomain_dim;
    const DimInterval img = predict_image(sigma, tau, dimA, codomain_dim);
    p.image_dim_lo = img.lo;
    p.image_dim_hi = img.hi;
    if (tau > 1.0) {
        p.graph_covered = false;
        p.graph_partial_lo = img.lo;
        p.graph_dim_lo = img.lo;
        p.graph_dim_hi = graph_bound(std::min(sigma, 1.0), dimA, codomain_dim);
    } else {
        const DimInterval g = predict_graph(sigma, tau, dimA, codomain_dim);
        p.graph_dim_lo = g.lo;
        p.graph_dim_hi = g.hi;
    }
    std::tie(p.lebesgue_positive, p.has_interior) = classify_measure_interior(tau, dimA, codomain_dim);
    // Hölder upper bound below the ambient dimension rules out positive area.
    if (codomain_dim == 2 && p.lebesgue_positive == TriState::Unknown && std::min(sigma, 1.0) > dimA / 2.0) {
        p.lebesgue_positive = TriState::No;
        p.has_interior = TriState::No;
    }
    return p;
}

}  // namespace lacuna
