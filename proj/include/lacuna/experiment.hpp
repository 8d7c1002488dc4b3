#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacuna/besselcf.hpp"
#include "lacuna/config.hpp"
#include "lacuna/fracdim.hpp"
#include "lacuna/oracle.hpp"
#include "lacuna/sampler.hpp"

namespace lacuna {

enum class Verdict { Consistent, Inconsistent, Inconclusive };

std::string to_string(Verdict v);

struct Exponents {
    double sigma = 0.0;
    double tau = 0.0;
    std::string source;  // "closed_form", "null", or "estimated"
};

// Closed form where available, otherwise local block exponents over k in [1, 14].
Exponents series_exponents(const SeriesSpec& spec);

// True when every coefficient is zero.
bool null_series(const SeriesSpec& spec);

struct ConfigPrediction {
    Prediction prediction;
    Exponents exponents;
    double dimA = 0.0;
    bool available = true;  // false when the measured quantity is outside the covered range
    double target_lo = 0.0;
    double target_hi = 0.0;
    std::string note;
};

ConfigPrediction predict_for(const ExperimentConfig& cfg);

struct ReplicateResult {
    std::uint64_t stream_id = 0;
    std::int64_t truncation_N = 0;
    double tail_bound = 0.0;
    BoxCountCurve curve;
    std::optional<DimensionEstimate> estimate;
    std::string error;
};

struct ExperimentReport {
    std::vector<ReplicateResult> replicates;
    double mean = 0.0;
    double spread = 0.0;  // sample standard deviation
    ConfigPrediction prediction;
    Verdict verdict = Verdict::Inconclusive;
    double tolerance = 0.0;
    std::string measure;
};

// Distance of the mean to [lo, hi] against tolerance + spread.
Verdict dimension_verdict(double mean, double spread, double lo, double hi, double tolerance);

ExperimentReport run_dimension(const ExperimentConfig& cfg, int threads);
nlohmann::json report_to_json(const ExperimentReport& report);

// Audit table of the full log-log fit.
std::string fit_table(const ReplicateResult& r);

SampledCurve run_eval(const ExperimentConfig& cfg, int threads);
std::string curve_csv(const SampledCurve& curve);

struct CharfnRow {
    double xi = 0.0;
    double analytic = 0.0;
    MCEstimate mc;
    bool within = true;
};

struct CharfnReport {
    std::vector<CharfnRow> rows;
    Verdict verdict = Verdict::Consistent;
    double tolerance = 4.0;
};

CharfnReport run_charfn(const ExperimentConfig& cfg, int threads);
std::string charfn_csv(const CharfnReport& report);

nlohmann::json prediction_to_json(const Prediction& p);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace lacuna
