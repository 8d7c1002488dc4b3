#pragma once

#include <optional>
#include <string>
#include <utility>

namespace lacuna {

enum class TriState { YesAlmostSurely, Unknown, No };

std::string to_string(TriState t);

struct DimInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct Prediction {
    double image_dim_lo = 0.0;
    double image_dim_hi = 0.0;
    double graph_dim_lo = 0.0;
    double graph_dim_hi = 0.0;
    bool graph_covered = true;                // false when τ > 1; graph fields then hold the partial bound
    std::optional<double> graph_partial_lo;  // dimA/τ lower bound for τ > 1
    TriState lebesgue_positive = TriState::Unknown;
    TriState has_interior = TriState::Unknown;
    int codomain_dim = 2;
};

DimInterval predict_image(double sigma, double tau, double dimA, int codomain_dim);

// Throws NotCoveredError for τ > 1.
DimInterval predict_graph(double sigma, double tau, double dimA, int codomain_dim);

std::pair<TriState, TriState> classify_measure_interior(double tau, double dimA, int codomain_dim);

struct RiemannExponents {
    double sigma = 0.0;
    double tau = 0.0;
    bool dimension_formula_applies = false;  // 1 < b <= a + 1/2
};

RiemannExponents riemann_exponents(double a, double b);

// dimA + 2 - 2τ < dimA/τ for planar graphs, decided through the sign of (1-τ)(dimA-2τ).
bool graph_additive_branch_smaller(double tau, double dimA);

Prediction predict(double sigma, double tau, double dimA, int codomain_dim);

}  // namespace lacuna
