#include "lacuna/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lacuna/parallel.hpp"

namespace lacuna {

using nlohmann::json;

namespace {

constexpr int kEstimateBlocks = 14;

json estimate_json(const DimensionEstimate& e) {
    return {{"value", e.value},         {"std_error", e.std_error}, {"fit_lo", e.fit_lo},
            {"fit_hi", e.fit_hi},       {"r_squared", e.r_squared}, {"log_inv_scale", e.log_inv_scale},
            {"log_count", e.log_count}};
}

json curve_json(const BoxCountCurve& c) {
    return {{"scales", c.scales},
            {"counts", c.counts},
            {"mean_counts", c.mean_counts},
            {"min_counts", c.min_counts},
            {"offsets_averaged", c.offsets_averaged},
            {"sample_count", c.sample_count}};
}

double sample_sd(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    NeumaierSum acc;
    for (double x : v) acc.add((x - mean) * (x - mean));
    return std::sqrt(acc.value() / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "consistent";
        case Verdict::Inconsistent: return "inconsistent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

bool null_series(const SeriesSpec& spec) {
    const auto* e = std::get_if<ExplicitCoefficients>(&spec.coeffs);
    return e && std::all_of(e->values.begin(), e->values.end(), [](double a) { return a == 0.0; });
}

Exponents series_exponents(const SeriesSpec& spec) {
    if (null_series(spec)) return {0.0, 0.0, "null"};
    if (auto cf = closed_form_exponents(spec.coeffs, spec.freqs)) return {cf->first, cf->second, "closed_form"};
    const GapExponents g = estimate_sigma_tau(spec.coeffs, spec.freqs, 1, kEstimateBlocks);
    return {g.sigma_est, g.tau_est, "estimated"};
}

ConfigPrediction predict_for(const ExperimentConfig& cfg) {
    ConfigPrediction out;
    const int cd = codomain_dim(cfg.spec);
    out.dimA = hausdorff_dim(cfg.test_set);
    if (null_series(cfg.spec)) {
        out.exponents = {0.0, 0.0, "null"};
        out.prediction.codomain_dim = cd;
        out.prediction.graph_dim_lo = out.prediction.graph_dim_hi = out.dimA;
        out.note = "identically zero series: image is a point, graph is a copy of the test set";
    } else {
        try {
            out.exponents = series_exponents(cfg.spec);
        } catch (const Error& e) {
            out.available = false;
            out.note = std::string("exponents unavailable: ") + e.what();
            return out;
        }
        const double sigma = std::min(out.exponents.sigma, out.exponents.tau);
        out.prediction = predict(sigma, out.exponents.tau, out.dimA, cd);
        if (cfg.measure == Measure::Graph && !out.prediction.graph_covered) {
            out.available = false;
            out.note = "graph dimension not covered for tau > 1";
        }
    }
    if (cfg.measure == Measure::Image) {
        out.target_lo = out.prediction.image_dim_lo;
        out.target_hi = out.prediction.image_dim_hi;
    } else {
        out.target_lo = out.prediction.graph_dim_lo;
        out.target_hi = out.prediction.graph_dim_hi;
    }
    return out;
}

Verdict dimension_verdict(double mean, double spread, double lo, double hi, double tolerance) {
    if (!std::isfinite(mean)) return Verdict::Inconclusive;
    const double dist = mean < lo ? lo - mean : (mean > hi ? mean - hi : 0.0);
    return dist <= tolerance + spread ? Verdict::Consistent : Verdict::Inconsistent;
}

ExperimentReport run_dimension(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    threads = resolve_threads(threads);
    const auto R = static_cast<std::size_t>(cfg.replicates);
    const int outer = static_cast<int>(std::min<std::size_t>(R, static_cast<std::size_t>(threads)));
    const int inner = std::max(1, threads / std::max(outer, 1));
    ExperimentReport rep;
    rep.replicates.resize(R);
    rep.measure = cfg.measure == Measure::Image ? "image" : "graph";
    rep.tolerance = cfg.tolerance.dimension;
    const double vscale = graph_value_scale(cfg.spec);
    parallel_for(R, outer, [&](std::size_t r) {
        ReplicateResult& out = rep.replicates[r];
        out.stream_id = r;
        EvalOptions opts;
        opts.path = cfg.path;
        opts.threads = inner;
        const SampledCurve curve = eval_series(cfg.spec, cfg.test_set, cfg.eps_tail, r, opts);
        out.truncation_N = curve.truncation_N;
        out.tail_bound = curve.tail_bound;
        const PointCloud pts = cfg.measure == Measure::Image ? image_points(curve) : graph_points(curve, vscale);
        const auto scales = dyadic_scales(pts, cfg.scales.j_min, cfg.scales.j_max);
        out.curve = box_count(pts, scales, cfg.scales.offsets, inner);
        try {
            out.estimate = fit_dimension(out.curve, cfg.scales.fit);
        } catch (const FitError& e) {
            out.error = e.what();
        }
    });
    std::vector<double> values;
    for (const auto& r : rep.replicates)
        if (r.estimate) values.push_back(r.estimate->value);
    rep.prediction = predict_for(cfg);
    if (values.size() != R || !rep.prediction.available) {
        rep.verdict = Verdict::Inconclusive;
        if (!values.empty()) {
            NeumaierSum acc;
            for (double v : values) acc.add(v);
            rep.mean = acc.value() / static_cast<double>(values.size());
            rep.spread = sample_sd(values, rep.mean);
        }
        return rep;
    }
    NeumaierSum acc;
    for (double v : values) acc.add(v);
    rep.mean = acc.value() / static_cast<double>(values.size());
    rep.spread = sample_sd(values, rep.mean);
    rep.verdict = dimension_verdict(rep.mean, rep.spread, rep.prediction.target_lo, rep.prediction.target_hi,
                                    rep.tolerance);
    return rep;
}

json prediction_to_json(const Prediction& p) {
    json j = {{"image_dim_lo", p.image_dim_lo},
              {"image_dim_hi", p.image_dim_hi},
              {"graph_dim_lo", p.graph_dim_lo},
              {"graph_dim_hi", p.graph_dim_hi},
              {"graph_covered", p.graph_covered},
              {"lebesgue_positive", to_string(p.lebesgue_positive)},
              {"has_interior", to_string(p.has_interior)},
              {"codomain_dim", p.codomain_dim}};
    if (p.graph_partial_lo) j["graph_partial_lo"] = *p.graph_partial_lo;
    return j;
}

json report_to_json(const ExperimentReport& rep) {
    json reps = json::array();
    for (const auto& r : rep.replicates) {
        json jr = {{"stream_id", r.stream_id},
                   {"truncation_N", r.truncation_N},
                   {"tail_bound", r.tail_bound},
                   {"box_counts", curve_json(r.curve)}};
        if (r.estimate)
            jr["estimate"] = estimate_json(*r.estimate);
        else
            jr["error"] = r.error;
        reps.push_back(jr);
    }
    const auto& cp = rep.prediction;
    json pred = prediction_to_json(cp.prediction);
    pred["sigma"] = cp.exponents.sigma;
    pred["tau"] = cp.exponents.tau;
    pred["exponent_source"] = cp.exponents.source;
    pred["dimA"] = cp.dimA;
    pred["available"] = cp.available;
    pred["target_lo"] = cp.target_lo;
    pred["target_hi"] = cp.target_hi;
    if (!cp.note.empty()) pred["note"] = cp.note;
    return {{"measure", rep.measure},   {"replicates", reps},         {"ensemble_mean", rep.mean},
            {"ensemble_sd", rep.spread}, {"prediction", pred},         {"verdict", to_string(rep.verdict)},
            {"tolerance", rep.tolerance}};
}

std::string fit_table(const ReplicateResult& r) {
    std::ostringstream os;
    os << "  stream " << r.stream_id << " N=" << r.truncation_N << "\n";
    os << "    scale            count   min_count   log(1/eps)   log(N)\n";
    for (std::size_t i = 0; i < r.curve.scales.size(); ++i) {
        const double m = r.curve.min_counts.empty() ? static_cast<double>(r.curve.counts[i]) : r.curve.min_counts[i];
        os << "    " << format_double(r.curve.scales[i]) << "  " << r.curve.counts[i] << "  " << m << "  "
           << -std::log(r.curve.scales[i]) << "  " << std::log(std::max(m, 1.0));
        if (r.estimate && static_cast<int>(i) >= r.estimate->fit_lo && static_cast<int>(i) <= r.estimate->fit_hi)
            os << "  *";
        os << "\n";
    }
    if (r.estimate)
        os << "    slope " << r.estimate->value << " +- " << r.estimate->std_error << " r2 " << r.estimate->r_squared
           << "\n";
    else
        os << "    fit failed: " << r.error << "\n";
    return os.str();
}

SampledCurve run_eval(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    EvalOptions opts;
    opts.path = cfg.path;
    opts.threads = resolve_threads(threads);
    return eval_series(cfg.spec, cfg.test_set, cfg.eps_tail, 0, opts);
}

std::string curve_csv(const SampledCurve& curve) {
    std::string out = "x,re,im\n";
    out.reserve(curve.xs.size() * 60);
    for (std::size_t i = 0; i < curve.xs.size(); ++i) {
        out += format_double(curve.xs[i]);
        out += ',';
        out += format_double(curve.values[i].real());
        out += ',';
        out += format_double(curve.values[i].imag());
        out += '\n';
    }
    return out;
}

CharfnReport run_charfn(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    std::vector<Atom> atoms;
    if (cfg.charfn.atoms > 0) {
        atoms = uniform_atoms(cfg.charfn.atoms);
    } else {
        const auto xs = materialize(cfg.test_set);
        for (double x : xs) atoms.push_back({x, 1.0 / static_cast<double>(xs.size())});
    }
    TermChoice choice;
    choice.terms = cfg.charfn.terms;
    choice.eps_tail = cfg.eps_tail;
    const auto analytic = expected_fourier_sq(cfg.spec, atoms, cfg.charfn.xis, choice);
    std::vector<cplx> vecs;
    for (double xi : cfg.charfn.xis) vecs.emplace_back(xi, 0.0);
    const auto mc = mc_fourier_sq(cfg.spec, atoms, vecs, cfg.charfn.replicates, cfg.master_seed, choice,
                                  resolve_threads(threads));
    CharfnReport rep;
    rep.tolerance = cfg.tolerance.charfn_stderr;
    for (std::size_t k = 0; k < vecs.size(); ++k) {
        CharfnRow row{cfg.charfn.xis[k], analytic[k], mc[k], true};
        row.within = std::fabs(row.analytic - row.mc.mean.real()) <= rep.tolerance * row.mc.std_error + 1e-12;
        if (!row.within) rep.verdict = Verdict::Inconsistent;
        rep.rows.push_back(row);
    }
    return rep;
}

std::string charfn_csv(const CharfnReport& rep) {
    std::string out = "xi,analytic,mc_mean,mc_stderr\n";
    for (const auto& r : rep.rows)
        out += format_double(r.xi) + "," + format_double(r.analytic) + "," + format_double(r.mc.mean.real()) + "," +
               format_double(r.mc.std_error) + "\n";
    return out;
}

}  // namespace lacuna
