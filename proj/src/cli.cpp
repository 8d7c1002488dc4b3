#include "lacuna/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lacuna/config.hpp"
#include "lacuna/experiment.hpp"
#include "lacuna/figures.hpp"
#include "lacuna/oracle.hpp"
#include "lacuna/parallel.hpp"

namespace lacuna::cli {

namespace {

using nlohmann::json;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    auto* opt = cmd->add_option("--config", c.config, "experiment config (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--seed", c.seed, "master seed override");
    cmd->add_option("--threads", c.threads, "worker threads (default: LACUNA_THREADS or all cores)");
    cmd->add_option("--out", c.out, "output path (default: config output path, else stdout)");
}

ExperimentConfig load(const Common& c) {
    ExperimentConfig cfg = load_config(c.config);
    if (c.seed) set_master_seed(cfg, *c.seed);
    return cfg;
}

void emit(const std::string& text, const std::string& out, const std::string& fallback) {
    const std::string& path = out.empty() ? fallback : out;
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error("write failed for '" + path + "'");
}

int cmd_eval(const Common& c) {
    const ExperimentConfig cfg = load(c);
    const SampledCurve curve = run_eval(cfg, c.threads);
    emit(curve_csv(curve), c.out, cfg.output.eval_csv);
    return kExitOk;
}

int cmd_dim(const Common& c) {
    const ExperimentConfig cfg = load(c);
    const ExperimentReport rep = run_dimension(cfg, c.threads);
    emit(report_to_json(rep).dump(2) + "\n", c.out, cfg.output.report_json);
    std::cerr << "verdict: " << to_string(rep.verdict) << " (mean " << rep.mean << ", sd " << rep.spread
              << ", target [" << rep.prediction.target_lo << ", " << rep.prediction.target_hi << "], tolerance "
              << rep.tolerance << ")\n";
    if (rep.verdict == Verdict::Inconsistent) {
        for (const auto& r : rep.replicates) std::cerr << fit_table(r);
        return kExitInconsistent;
    }
    return kExitOk;
}

int cmd_charfn(const Common& c) {
    const ExperimentConfig cfg = load(c);
    const CharfnReport rep = run_charfn(cfg, c.threads);
    emit(charfn_csv(rep), c.out, cfg.output.charfn_csv);
    std::cerr << "verdict: " << to_string(rep.verdict) << " (tolerance " << rep.tolerance << " stderr)\n";
    return rep.verdict == Verdict::Inconsistent ? kExitInconsistent : kExitOk;
}

struct PredictArgs {
    std::string preset;
    double beta = 0.5;
    double lambda = 2.0;
    double a = 2.0;
    double b = 2.0;
    double dimA = 1.0;
    std::string out;
};

int cmd_predict(const PredictArgs& p) {
    double sigma = 0.0, tau = 0.0;
    json params;
    if (p.preset == "weierstrass") {
        if (!(p.beta > 0.0) || !(p.lambda > 1.0)) throw ValidationError("weierstrass needs beta > 0 and lambda > 1");
        sigma = tau = p.beta;
        params = {{"beta", p.beta}, {"lambda", p.lambda}};
    } else if (p.preset == "riemann") {
        const RiemannExponents e = riemann_exponents(p.a, p.b);
        sigma = e.sigma;
        tau = e.tau;
        params = {{"a", p.a}, {"b", p.b}, {"dimension_formula_applies", e.dimension_formula_applies}};
    } else {
        throw ValidationError("predict: preset must be 'weierstrass' or 'riemann'");
    }
    json j = {{"preset", p.preset}, {"parameters", params}, {"sigma", sigma}, {"tau", tau}, {"dimA", p.dimA}};
    j["complex"] = prediction_to_json(predict(sigma, tau, p.dimA, 2));
    j["real_sine"] = prediction_to_json(predict(sigma, tau, p.dimA, 1));
    emit(j.dump(2) + "\n", p.out, "");
    return kExitOk;
}

int cmd_figure(const std::string& id, const Common& c) {
    FigurePreset preset = figure_preset(id);
    if (c.seed)
        if (auto* s = std::get_if<SteinhausPhases>(&preset.spec.phases)) s->seed = *c.seed;
    if (c.out.empty()) throw ValidationError("figure: --out is required");
    write_png(render_figure(preset, resolve_threads(c.threads)), c.out);
    return kExitOk;
}

int cmd_sigma_tau(const Common& c, int k_min, int k_max) {
    const ExperimentConfig cfg = load(c);
    const GapExponents g = estimate_sigma_tau(cfg.spec.coeffs, cfg.spec.freqs, k_min, k_max);
    json blocks = json::array();
    for (const auto& b : g.blocks)
        blocks.push_back({{"k", b.k},
                          {"first", b.index_range.first},
                          {"last", b.index_range.last},
                          {"s", b.s},
                          {"s_squared", b.s_squared}});
    json per_k = json::array(), local = json::array();
    for (const auto& [k, v] : g.per_k) per_k.push_back({k, v});
    for (const auto& [k, v] : g.local) local.push_back({k, v});
    json j = {{"q", g.q},         {"blocks", blocks},           {"per_k", per_k},     {"local", local},
              {"sigma_est", g.sigma_est}, {"tau_est", g.tau_est}, {"raw_min", g.raw_min}, {"raw_max", g.raw_max},
              {"slope", g.slope}, {"window", {g.window.first, g.window.second}}};
    if (auto cf = closed_form_exponents(cfg.spec.coeffs, cfg.spec.freqs))
        j["closed_form"] = {{"sigma", cf->first}, {"tau", cf->second}};
    emit(j.dump(2) + "\n", c.out, "");
    return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Random lacunary series: evaluation, dimension measurement and predictions"};
    app.require_subcommand(1);

    Common eval_c, dim_c, charfn_c, fig_c, st_c;
    auto* eval = app.add_subcommand("eval", "write the sampled curve as CSV (x,re,im)");
    add_common(eval, eval_c, true);
    auto* dim = app.add_subcommand("dim", "box-counting dimension over replicates with a verdict");
    add_common(dim, dim_c, true);
    auto* charfn = app.add_subcommand("charfn", "Bessel-product second moment against Monte Carlo");
    add_common(charfn, charfn_c, true);

    PredictArgs pa;
    auto* pred = app.add_subcommand("predict", "predicted dimensions and classifications");
    pred->add_option("--preset", pa.preset, "weierstrass or riemann")->required();
    pred->add_option("--beta", pa.beta, "weierstrass coefficient exponent");
    pred->add_option("--lambda", pa.lambda, "weierstrass frequency ratio");
    pred->add_option("--a", pa.a, "riemann frequency exponent");
    pred->add_option("--b", pa.b, "riemann coefficient exponent");
    pred->add_option("--dimA", pa.dimA, "Hausdorff dimension of the test set");
    pred->add_option("--out", pa.out, "output path (default: stdout)");

    std::string fig_id;
    auto* fig = app.add_subcommand("figure", "render a figure preset to PNG");
    fig->add_option("--preset", fig_id, "fig1a..fig1i, fig2a..fig2c, fig3a, fig3b, fig4a, fig4b, fig5a..fig5c, fig6")
        ->required();
    add_common(fig, fig_c, false);

    int k_min = 1, k_max = 14;
    auto* st = app.add_subcommand("sigma-tau", "block exponents of the configured series");
    add_common(st, st_c, true);
    st->add_option("--k-min", k_min, "first block index");
    st->add_option("--k-max", k_max, "last block index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (eval->parsed()) return cmd_eval(eval_c);
        if (dim->parsed()) return cmd_dim(dim_c);
        if (charfn->parsed()) return cmd_charfn(charfn_c);
        if (pred->parsed()) return cmd_predict(pa);
        if (fig->parsed()) return cmd_figure(fig_id, fig_c);
        if (st->parsed()) return cmd_sigma_tau(st_c, k_min, k_max);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const TruncationError& e) {
        std::cerr << "truncation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotCoveredError& e) {
        std::cerr << "not covered: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace lacuna::cli
