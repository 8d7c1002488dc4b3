#include "lacuna/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "lacuna/numeric.hpp"

namespace lacuna {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    require_object(j, where);
    for (const auto& [key, _] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known) throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

double get_double(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) throw ValidationError(where + "." + key + ": expected a number");
    return v.get<double>();
}

double need_double(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
    return get_double(j, key, 0.0, where);
}

std::int64_t get_int(const json& j, const char* key, std::int64_t fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ValidationError(where + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

std::string get_string(const json& j, const char* key, const std::string& fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) throw ValidationError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::string need_type(const json& j, const std::string& where) {
    require_object(j, where);
    if (!j.contains("type")) throw ValidationError(where + ": missing 'type'");
    return get_string(j, "type", "", where);
}

std::vector<double> get_values(const json& j, const std::string& where) {
    if (!j.contains("values") || !j.at("values").is_array()) throw ValidationError(where + ": 'values' must be an array");
    std::vector<double> out;
    for (const json& v : j.at("values")) {
        if (!v.is_number()) throw ValidationError(where + ".values: expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

FrequencyRule parse_freqs(const json& j) {
    const std::string w = "spec.freqs";
    const std::string type = need_type(j, w);
    if (type == "geometric") {
        check_keys(j, {"type", "lambda"}, w);
        return GeometricFrequency{need_double(j, "lambda", w)};
    }
    if (type == "power") {
        check_keys(j, {"type", "exponent"}, w);
        return PowerFrequency{need_double(j, "exponent", w)};
    }
    if (type == "explicit") {
        check_keys(j, {"type", "values"}, w);
        return ExplicitFrequency{get_values(j, w)};
    }
    throw ValidationError(w + ": unknown type '" + type + "'");
}

CoefficientRule parse_coeffs(const json& j) {
    const std::string w = "spec.coeffs";
    const std::string type = need_type(j, w);
    if (type == "geometric") {
        check_keys(j, {"type", "beta", "lambda"}, w);
        return GeometricCoefficients{need_double(j, "beta", w), need_double(j, "lambda", w)};
    }
    if (type == "power") {
        check_keys(j, {"type", "b"}, w);
        return PowerCoefficients{need_double(j, "b", w)};
    }
    if (type == "per_block_geometric") {
        check_keys(j, {"type", "q"}, w);
        return PerBlockGeometricCoefficients{need_double(j, "q", w)};
    }
    if (type == "explicit") {
        check_keys(j, {"type", "values"}, w);
        return ExplicitCoefficients{get_values(j, w)};
    }
    throw ValidationError(w + ": unknown type '" + type + "'");
}

BasisFunction parse_basis(const json& j) {
    const std::string w = "spec.basis";
    const std::string type = need_type(j, w);
    if (type == "exp") {
        check_keys(j, {"type"}, w);
        return ExpBasis{};
    }
    if (type == "one_minus_exp") {
        check_keys(j, {"type"}, w);
        return OneMinusExpBasis{};
    }
    if (type == "expdiff") {
        check_keys(j, {"type", "beta", "lambda"}, w);
        return ExpDiffBasis{need_double(j, "beta", w), need_double(j, "lambda", w)};
    }
    if (type == "takagi_sine") {
        check_keys(j, {"type"}, w);
        return TakagiSineBasis{};
    }
    if (type == "sine_real") {
        check_keys(j, {"type"}, w);
        return SineRealBasis{};
    }
    throw ValidationError(w + ": unknown type '" + type + "'");
}

PhaseModel parse_phases(const json& j, std::uint64_t seed) {
    const std::string w = "spec.phases";
    const std::string type = need_type(j, w);
    if (type == "steinhaus") {
        check_keys(j, {"type"}, w);
        return SteinhausPhases{seed};
    }
    if (type == "equidistributed") {
        check_keys(j, {"type", "alpha"}, w);
        return EquidistributedPhases{need_double(j, "alpha", w)};
    }
    if (type == "zero") {
        check_keys(j, {"type"}, w);
        return ZeroPhases{};
    }
    throw ValidationError(w + ": unknown type '" + type + "'");
}

SeriesForm parse_form(const std::string& s) {
    if (s == "one_sided") return SeriesForm::OneSided;
    if (s == "two_sided") return SeriesForm::TwoSided;
    if (s == "vortex") return SeriesForm::Vortex;
    throw ValidationError("spec.form: unknown value '" + s + "'");
}

std::string form_name(SeriesForm f) {
    switch (f) {
        case SeriesForm::OneSided: return "one_sided";
        case SeriesForm::TwoSided: return "two_sided";
        case SeriesForm::Vortex: return "vortex";
    }
    return "one_sided";
}

SeriesSpec parse_preset(const json& j, std::uint64_t seed) {
    const std::string w = "spec";
    const std::string name = get_string(j, "preset", "", w);
    const PhaseModel phases = j.contains("phases") ? parse_phases(j.at("phases"), seed) : PhaseModel{SteinhausPhases{seed}};
    if (name == "weierstrass" || name == "weierstrass_mandelbrot" || name == "expdiff" || name == "takagi") {
        check_keys(j, {"preset", "beta", "lambda", "phases"}, w);
        const double beta = need_double(j, "beta", w), lambda = need_double(j, "lambda", w);
        if (name == "weierstrass") return presets::weierstrass(beta, lambda, phases);
        if (name == "weierstrass_mandelbrot") return presets::weierstrass_mandelbrot(beta, lambda, phases);
        if (name == "expdiff") return presets::expdiff(beta, lambda, phases);
        return presets::takagi(beta, lambda, phases);
    }
    if (name == "riemann" || name == "real_sine") {
        check_keys(j, {"preset", "a", "b", "phases"}, w);
        const double a = need_double(j, "a", w), b = need_double(j, "b", w);
        return name == "riemann" ? presets::riemann(a, b, phases) : presets::real_sine(a, b, phases);
    }
    if (name == "riemann_vortex" || name == "dyadic_tau_zero") {
        check_keys(j, {"preset", "phases"}, w);
        return name == "riemann_vortex" ? presets::riemann_vortex(phases) : presets::dyadic_tau_zero(phases);
    }
    throw ValidationError("spec: unknown preset '" + name + "'");
}

json values_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

TestSet parse_test_set(const json& j) {
    const std::string w = "test_set";
    const std::string type = need_type(j, w);
    if (type == "interval") {
        check_keys(j, {"type", "lo", "hi", "points"}, w);
        IntervalSet s;
        s.lo = get_double(j, "lo", s.lo, w);
        s.hi = get_double(j, "hi", s.hi, w);
        s.points = get_int(j, "points", s.points, w);
        return s;
    }
    if (type == "cantor") {
        check_keys(j, {"type", "ratio", "level"}, w);
        CantorSet s;
        s.ratio = get_double(j, "ratio", s.ratio, w);
        s.level = static_cast<int>(get_int(j, "level", s.level, w));
        return s;
    }
    throw ValidationError(w + ": unknown type '" + type + "'");
}

json test_set_json(const TestSet& set) {
    if (const auto* s = std::get_if<IntervalSet>(&set))
        return {{"type", "interval"}, {"lo", s->lo}, {"hi", s->hi}, {"points", s->points}};
    const auto& c = std::get<CantorSet>(set);
    return {{"type", "cantor"}, {"ratio", c.ratio}, {"level", c.level}};
}

EvalPath parse_path(const std::string& s) {
    if (s == "auto") return EvalPath::Auto;
    if (s == "direct") return EvalPath::Direct;
    if (s == "spectral") return EvalPath::Spectral;
    throw ValidationError("path: unknown value '" + s + "'");
}

std::string path_name(EvalPath p) {
    switch (p) {
        case EvalPath::Auto: return "auto";
        case EvalPath::Direct: return "direct";
        case EvalPath::Spectral: return "spectral";
    }
    return "auto";
}

}  // namespace

SeriesSpec parse_spec(const json& j, std::uint64_t seed) {
    require_object(j, "spec");
    if (j.contains("preset")) return parse_preset(j, seed);
    check_keys(j, {"coeffs", "freqs", "basis", "phases", "freq_scale", "form"}, "spec");
    SeriesSpec s;
    if (!j.contains("coeffs") || !j.contains("freqs")) throw ValidationError("spec: 'coeffs' and 'freqs' are required");
    s.coeffs = parse_coeffs(j.at("coeffs"));
    s.freqs = parse_freqs(j.at("freqs"));
    s.basis = j.contains("basis") ? parse_basis(j.at("basis")) : BasisFunction{ExpBasis{}};
    s.phases = j.contains("phases") ? parse_phases(j.at("phases"), seed) : PhaseModel{SteinhausPhases{seed}};
    s.freq_scale = get_double(j, "freq_scale", 1.0, "spec");
    s.form = parse_form(get_string(j, "form", "one_sided", "spec"));
    return s;
}

json spec_to_json(const SeriesSpec& spec) {
    json j;
    j["coeffs"] = std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, GeometricCoefficients>)
                return {{"type", "geometric"}, {"beta", c.beta}, {"lambda", c.lambda}};
            else if constexpr (std::is_same_v<T, PowerCoefficients>)
                return {{"type", "power"}, {"b", c.b}};
            else if constexpr (std::is_same_v<T, PerBlockGeometricCoefficients>)
                return {{"type", "per_block_geometric"}, {"q", c.q}};
            else
                return {{"type", "explicit"}, {"values", values_json(c.values)}};
        },
        spec.coeffs);
    j["freqs"] = std::visit(
        [](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, GeometricFrequency>)
                return {{"type", "geometric"}, {"lambda", f.lambda}};
            else if constexpr (std::is_same_v<T, PowerFrequency>)
                return {{"type", "power"}, {"exponent", f.exponent}};
            else
                return {{"type", "explicit"}, {"values", values_json(f.values)}};
        },
        spec.freqs);
    j["basis"] = std::visit(
        [](const auto& b) -> json {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, ExpBasis>)
                return {{"type", "exp"}};
            else if constexpr (std::is_same_v<T, OneMinusExpBasis>)
                return {{"type", "one_minus_exp"}};
            else if constexpr (std::is_same_v<T, ExpDiffBasis>)
                return {{"type", "expdiff"}, {"beta", b.beta}, {"lambda", b.lambda}};
            else if constexpr (std::is_same_v<T, TakagiSineBasis>)
                return {{"type", "takagi_sine"}};
            else
                return {{"type", "sine_real"}};
        },
        spec.basis);
    j["phases"] = std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SteinhausPhases>)
                return {{"type", "steinhaus"}};
            else if constexpr (std::is_same_v<T, EquidistributedPhases>)
                return {{"type", "equidistributed"}, {"alpha", p.alpha}};
            else
                return {{"type", "zero"}};
        },
        spec.phases);
    j["freq_scale"] = spec.freq_scale;
    j["form"] = form_name(spec.form);
    return j;
}

void set_master_seed(ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.master_seed = seed;
    if (auto* p = std::get_if<SteinhausPhases>(&cfg.spec.phases)) p->seed = seed;
}

void validate(const ExperimentConfig& cfg) {
    validate(cfg.spec);
    validate(cfg.test_set);
    if (!(cfg.eps_tail > 0.0)) throw ValidationError("eps_tail must be > 0");
    if (cfg.replicates < 1) throw ValidationError("replicates must be >= 1");
    if (cfg.scales.j_min < 0 || cfg.scales.j_max < cfg.scales.j_min || cfg.scales.j_max > 30)
        throw ValidationError("scales: need 0 <= j_min <= j_max <= 30");
    if (cfg.scales.offsets < 1) throw ValidationError("scales.offsets must be >= 1");
    if (cfg.scales.fit.min_scales < 2) throw ValidationError("scales.min_scales must be >= 2");
    if (cfg.charfn.atoms < 0) throw ValidationError("charfn.atoms must be >= 0");
    if (cfg.charfn.replicates < 100) throw ValidationError("charfn.replicates must be >= 100");
    for (double xi : cfg.charfn.xis)
        if (!(xi >= 0.0)) throw ValidationError("charfn.xis must be >= 0");
    if (!(cfg.tolerance.dimension >= 0.0) || !(cfg.tolerance.charfn_stderr > 0.0))
        throw ValidationError("tolerances must be non-negative");
    if (const auto* p = std::get_if<SteinhausPhases>(&cfg.spec.phases); p && p->seed != cfg.master_seed)
        throw ValidationError("Steinhaus seed must equal master_seed");
}

ExperimentConfig parse_config(const json& j) {
    check_keys(j, {"spec", "test_set", "eps_tail", "replicates", "scales", "measure", "master_seed", "path", "charfn",
                   "tolerance", "output"},
               "config");
    ExperimentConfig c;
    if (j.contains("master_seed")) {
        if (!j.at("master_seed").is_number_unsigned()) throw ValidationError("config.master_seed: expected an unsigned integer");
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
    }
    if (!j.contains("spec")) throw ValidationError("config: missing 'spec'");
    c.spec = parse_spec(j.at("spec"), c.master_seed);
    if (j.contains("test_set")) c.test_set = parse_test_set(j.at("test_set"));
    c.eps_tail = get_double(j, "eps_tail", c.eps_tail, "config");
    c.replicates = get_int(j, "replicates", c.replicates, "config");
    if (j.contains("scales")) {
        const json& s = j.at("scales");
        check_keys(s, {"j_min", "j_max", "offsets", "min_count", "max_fraction", "min_scales"}, "scales");
        c.scales.j_min = static_cast<int>(get_int(s, "j_min", c.scales.j_min, "scales"));
        c.scales.j_max = static_cast<int>(get_int(s, "j_max", c.scales.j_max, "scales"));
        c.scales.offsets = static_cast<int>(get_int(s, "offsets", c.scales.offsets, "scales"));
        c.scales.fit.min_count = get_double(s, "min_count", c.scales.fit.min_count, "scales");
        c.scales.fit.max_fraction = get_double(s, "max_fraction", c.scales.fit.max_fraction, "scales");
        c.scales.fit.min_scales = static_cast<int>(get_int(s, "min_scales", c.scales.fit.min_scales, "scales"));
    }
    const std::string m = get_string(j, "measure", "image", "config");
    if (m == "image")
        c.measure = Measure::Image;
    else if (m == "graph")
        c.measure = Measure::Graph;
    else
        throw ValidationError("config.measure: expected 'image' or 'graph'");
    c.path = parse_path(get_string(j, "path", "auto", "config"));
    if (j.contains("charfn")) {
        const json& s = j.at("charfn");
        check_keys(s, {"xis", "atoms", "replicates", "terms"}, "charfn");
        if (s.contains("xis")) {
            if (!s.at("xis").is_array()) throw ValidationError("charfn.xis: expected an array");
            c.charfn.xis.clear();
            for (const json& v : s.at("xis")) {
                if (!v.is_number()) throw ValidationError("charfn.xis: expected numbers");
                c.charfn.xis.push_back(v.get<double>());
            }
        }
        c.charfn.atoms = get_int(s, "atoms", c.charfn.atoms, "charfn");
        c.charfn.replicates = get_int(s, "replicates", c.charfn.replicates, "charfn");
        if (s.contains("terms")) c.charfn.terms = get_int(s, "terms", 0, "charfn");
    }
    if (j.contains("tolerance")) {
        const json& s = j.at("tolerance");
        check_keys(s, {"dimension", "charfn_stderr"}, "tolerance");
        c.tolerance.dimension = get_double(s, "dimension", c.tolerance.dimension, "tolerance");
        c.tolerance.charfn_stderr = get_double(s, "charfn_stderr", c.tolerance.charfn_stderr, "tolerance");
    }
    if (j.contains("output")) {
        const json& s = j.at("output");
        check_keys(s, {"eval_csv", "report_json", "charfn_csv"}, "output");
        c.output.eval_csv = get_string(s, "eval_csv", "", "output");
        c.output.report_json = get_string(s, "report_json", "", "output");
        c.output.charfn_csv = get_string(s, "charfn_csv", "", "output");
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("config '" + path + "': " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["spec"] = spec_to_json(c.spec);
    j["test_set"] = test_set_json(c.test_set);
    j["eps_tail"] = c.eps_tail;
    j["replicates"] = c.replicates;
    j["scales"] = {{"j_min", c.scales.j_min},
                   {"j_max", c.scales.j_max},
                   {"offsets", c.scales.offsets},
                   {"min_count", c.scales.fit.min_count},
                   {"max_fraction", c.scales.fit.max_fraction},
                   {"min_scales", c.scales.fit.min_scales}};
    j["measure"] = c.measure == Measure::Image ? "image" : "graph";
    j["master_seed"] = c.master_seed;
    j["path"] = path_name(c.path);
    json cf = {{"xis", values_json(c.charfn.xis)}, {"atoms", c.charfn.atoms}, {"replicates", c.charfn.replicates}};
    if (c.charfn.terms) cf["terms"] = *c.charfn.terms;
    j["charfn"] = cf;
    j["tolerance"] = {{"dimension", c.tolerance.dimension}, {"charfn_stderr", c.tolerance.charfn_stderr}};
    j["output"] = {{"eval_csv", c.output.eval_csv},
                   {"report_json", c.output.report_json},
                   {"charfn_csv", c.output.charfn_csv}};
    return j;
}

}  // namespace lacuna
