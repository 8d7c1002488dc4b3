#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lacuna/pointcloud.hpp"
#include "lacuna/sampler.hpp"

namespace lacuna {

struct BoxCountCurve {
    std::vector<double> scales;             // decreasing
    std::vector<std::int64_t> counts;       // grid anchored at the bounding-box corner
    std::vector<double> mean_counts;        // averaged over shifted grids
    std::vector<double> min_counts;         // smallest count over shifted grids
    int offsets_averaged = 1;
    std::int64_t sample_count = 0;
};

struct FitPolicy {
    double min_count = 10.0;
    double max_fraction = 0.2;  // of the sample count
    int min_scales = 4;
    bool operator==(const FitPolicy&) const = default;
};

struct DimensionEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int fit_lo = 0;  // indices into the curve, inclusive
    int fit_hi = 0;
    double r_squared = 0.0;
    std::vector<double> log_inv_scale;  // full curve, for audit
    std::vector<double> log_count;
};

struct HolderPolicy {
    int j_lo = 2;      // smallest lag 2^j_lo grid steps
    int j_margin = 4;  // largest lag 2^(J - j_margin) for 2^J samples
};

struct HolderEstimate {
    double exponent = 0.0;
    double std_error = 0.0;
    double r_squared = 0.0;
    int j_lo = 0;
    int j_hi = 0;
    std::vector<double> log_lag;
    std::vector<double> log_oscillation;
};

// Smallest power of two strictly greater than the largest bounding-box side (1 for a single point).
double grid_extent(const PointCloud& points);

// Scales D·2^-j for j in [j_min, j_max].
std::vector<double> dyadic_scales(const PointCloud& points, int j_min, int j_max);

// Occupied cells per scale. Dyadic scales from dyadic_scales() use the hierarchical counter;
// anything else is counted scale by scale.
BoxCountCurve box_count(const PointCloud& points, std::span<const double> scales, int offsets = 4, int threads = 1);
BoxCountCurve box_count_direct(const PointCloud& points, std::span<const double> scales, int offsets = 4,
                               int threads = 1);

// Slope of log N against log(1/ε) on the longest contiguous run of scales admitted by the policy.
DimensionEstimate fit_dimension(const BoxCountCurve& curve, const FitPolicy& policy = {});

// Max-oscillation Hölder exponent on a uniform grid.
HolderEstimate holder_exponent(const SampledCurve& curve, const HolderPolicy& policy = {});

// Fraction of bounding-box cells of the given side that hold at least one point.
double occupied_fraction(const PointCloud& points, double resolution);

std::string box_count_csv(const BoxCountCurve& curve);

}  // namespace lacuna
