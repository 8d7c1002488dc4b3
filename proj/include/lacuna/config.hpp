#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lacuna/fracdim.hpp"
#include "lacuna/sampler.hpp"

namespace lacuna {

struct ScalesPolicy {
    int j_min = 2;
    int j_max = 10;
    int offsets = 4;
    FitPolicy fit;
    bool operator==(const ScalesPolicy&) const = default;
};

enum class Measure { Image, Graph };

struct CharfnSettings {
    std::vector<double> xis{0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0};
    std::int64_t atoms = 64;  // uniform atoms on [0,1); 0 takes the test-set points
    std::int64_t replicates = 100000;
    std::optional<std::int64_t> terms;
    bool operator==(const CharfnSettings&) const = default;
};

struct Tolerances {
    double dimension = 0.2;  // added to the ensemble standard deviation
    double charfn_stderr = 4.0;
    bool operator==(const Tolerances&) const = default;
};

struct OutputPaths {
    std::string eval_csv;
    std::string report_json;
    std::string charfn_csv;
    bool operator==(const OutputPaths&) const = default;
};

struct ExperimentConfig {
    SeriesSpec spec;
    TestSet test_set = IntervalSet{0.0, 1.0, 65536};
    double eps_tail = 1e-8;
    std::int64_t replicates = 8;
    ScalesPolicy scales;
    Measure measure = Measure::Image;
    std::uint64_t master_seed = 0;
    EvalPath path = EvalPath::Auto;
    CharfnSettings charfn;
    Tolerances tolerance;
    OutputPaths output;
    bool operator==(const ExperimentConfig&) const = default;
};

// Steinhaus seeds always follow master_seed.
void set_master_seed(ExperimentConfig& cfg, std::uint64_t seed);

void validate(const ExperimentConfig& cfg);

// Throws ValidationError on unknown keys, wrong types, or invalid values.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

SeriesSpec parse_spec(const nlohmann::json& j, std::uint64_t seed);
nlohmann::json spec_to_json(const SeriesSpec& spec);

}  // namespace lacuna
