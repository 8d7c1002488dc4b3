#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lacuna/cli.hpp"
#include "lacuna/config.hpp"
#include "lacuna/experiment.hpp"
#include "lacuna/figures.hpp"

using namespace lacuna;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / ("lacuna_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_json(const std::string& name, const json& j) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LACUNA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json weierstrass_config() {
    return json::parse(R"({
        "spec": {"preset": "weierstrass", "beta": 0.7, "lambda": 6},
        "test_set": {"type": "interval", "lo": 0, "hi": 1, "points": 65536},
        "master_seed": 11
    })");
}

json null_graph_config() {
    return json::parse(R"({
        "spec": {"coeffs": {"type": "explicit", "values": [0]}, "freqs": {"type": "explicit", "values": [1]}},
        "test_set": {"type": "interval", "lo": 0, "hi": 1, "points": 65536},
        "replicates": 2,
        "measure": "graph",
        "scales": {"j_min": 2, "j_max": 12},
        "master_seed": 1
    })");
}

}  // namespace

TEST_CASE("config round trip") {
    const json variants[] = {
        weierstrass_config(),
        null_graph_config(),
        json::parse(R"({"spec": {"preset": "riemann", "a": 2, "b": 2, "phases": {"type": "zero"}},
                        "test_set": {"type": "cantor", "ratio": 0.25, "level": 9}, "path": "direct",
                        "charfn": {"xis": [0, 1], "atoms": 0, "replicates": 500, "terms": 30},
                        "tolerance": {"dimension": 0.1, "charfn_stderr": 3},
                        "output": {"eval_csv": "a.csv", "report_json": "b.json", "charfn_csv": "c.csv"},
                        "master_seed": 18446744073709551615})"),
        json::parse(R"({"spec": {"coeffs": {"type": "power", "b": 2}, "freqs": {"type": "geometric", "lambda": 2},
                        "basis": {"type": "expdiff", "beta": 0.3, "lambda": 6},
                        "phases": {"type": "equidistributed", "alpha": 3.141592653589793},
                        "freq_scale": 2, "form": "one_sided"}, "eps_tail": 1e-6})"),
        json::parse(R"({"spec": {"preset": "riemann_vortex"}, "measure": "graph"})"),
    };
    for (const json& v : variants) {
        const ExperimentConfig c = parse_config(v);
        const json once = to_json(c);
        const ExperimentConfig back = parse_config(once);
        CHECK(back == c);
        CHECK(to_json(back) == once);
    }
    const ExperimentConfig c = parse_config(variants[2]);
    CHECK(c.master_seed == 18446744073709551615ULL);
    CHECK(c.charfn.atoms == 0);
    CHECK(c.output.report_json == "b.json");
}

TEST_CASE("unknown keys and bad values are rejected") {
    json j = weierstrass_config();
    j["colour"] = "red";
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = weierstrass_config();
    j["spec"]["gamma"] = 1;
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = weierstrass_config();
    j["scales"] = {{"j_lo", 2}};
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = weierstrass_config();
    j["spec"]["phases"] = {{"type", "steinhaus"}, {"seed", 4}};
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = weierstrass_config();
    j["master_seed"] = -1;
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = weierstrass_config();
    j["measure"] = "volume";
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = weierstrass_config();
    j["spec"]["preset"] = "peano";
    CHECK_THROWS_AS(parse_config(j), ValidationError);
}

TEST_CASE("preset shorthand expands to the full series description") {
    const ExperimentConfig c = parse_config(weierstrass_config());
    CHECK(c.spec == presets::weierstrass(0.7, 6.0, SteinhausPhases{11}));
    ExperimentConfig d = c;
    set_master_seed(d, 5);
    CHECK(d.spec == presets::weierstrass(0.7, 6.0, SteinhausPhases{5}));
    const json full = spec_to_json(c.spec);
    CHECK(full.at("coeffs").at("type") == "geometric");
    CHECK(parse_spec(full, 11) == c.spec);
}

TEST_CASE("eval output format and determinism") {
    const ExperimentConfig c = parse_config(weierstrass_config());
    const std::string csv = curve_csv(run_eval(c, 1));
    CHECK(csv.rfind("x,re,im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 65536 + 1);
    CHECK(curve_csv(run_eval(c, 1)) == csv);
    CHECK(curve_csv(run_eval(c, 4)) == csv);
}

TEST_CASE("zero-phase lambda=2 beta=1 at the origin sums to one") {
    json j = json::parse(R"({"spec": {"preset": "weierstrass", "beta": 1, "lambda": 2, "phases": {"type": "zero"}},
                             "test_set": {"type": "interval", "lo": 0, "hi": 1, "points": 64}})");
    const SampledCurve s = run_eval(parse_config(j), 1);
    REQUIRE(s.xs.front() == 0.0);
    CHECK(std::fabs(s.values.front().real() - 1.0) <= s.tail_bound);
    CHECK(std::fabs(s.values.front().imag()) <= s.tail_bound);
    CHECK(s.tail_bound <= 1e-8);
}

TEST_CASE("verdict rule") {
    CHECK(dimension_verdict(1.4, 0.01, 1.4286, 1.4286, 0.2) == Verdict::Consistent);
    CHECK(dimension_verdict(1.0, 0.01, 1.4286, 1.4286, 0.2) == Verdict::Inconsistent);
    CHECK(dimension_verdict(1.5, 0.0, 1.0, 2.0, 0.0) == Verdict::Consistent);
    CHECK(dimension_verdict(2.25, 0.1, 1.0, 2.0, 0.2) == Verdict::Consistent);
    CHECK(dimension_verdict(2.35, 0.1, 1.0, 2.0, 0.2) == Verdict::Inconsistent);
    CHECK(to_string(Verdict::Inconclusive) == "inconclusive");
}

TEST_CASE("null series graph is a segment") {
    const ExperimentConfig c = parse_config(null_graph_config());
    CHECK(null_series(c.spec));
    const ExperimentReport r = run_dimension(c, 2);
    CHECK(std::fabs(r.mean - 1.0) <= 0.05);
    CHECK(r.prediction.target_lo == 1.0);
    CHECK(r.verdict == Verdict::Consistent);
    REQUIRE(r.replicates.size() == 2);
    CHECK(r.replicates[1].stream_id == 1);
    const json j = report_to_json(r);
    CHECK(j.at("verdict") == "consistent");
}

TEST_CASE("charfn trivial cases") {
    json j = weierstrass_config();
    j["charfn"] = {{"xis", {0.0, 2.0}}, {"atoms", 1}, {"replicates", 1000}, {"terms", 40}};
    const CharfnReport r = run_charfn(parse_config(j), 2);
    REQUIRE(r.rows.size() == 2);
    for (const CharfnRow& row : r.rows) {
        CHECK(row.analytic == 1.0);
        CHECK(row.mc.mean.real() == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(r.rows[0].mc.std_error == 0.0);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK(charfn_csv(r).rfind("xi,analytic,mc_mean,mc_stderr\n", 0) == 0);
}

TEST_CASE("figure presets match their captions") {
    struct Row {
        const char* id;
        double beta, lambda;
    };
    const Row weier[] = {{"fig1a", 0.3, 6},  {"fig1b", 0.7, 6},  {"fig1c", 0.9, 6},
                         {"fig1d", 0.7, 6.5}, {"fig1e", 0.7, std::sqrt(43.0)}, {"fig1f", 0.7, 2 * std::numbers::pi},
                         {"fig1g", 0.4, 30}, {"fig1h", 0.5, 30}, {"fig1i", 0.6, 30}};
    for (const Row& r : weier) CHECK(figure_preset(r.id).spec == presets::weierstrass(r.beta, r.lambda, ZeroPhases{}));
    CHECK(figure_preset("fig2a").spec == presets::riemann(6, 2, ZeroPhases{}));
    CHECK(figure_preset("fig2b").spec == presets::riemann(3, 2, ZeroPhases{}));
    CHECK(figure_preset("fig2c").spec == presets::riemann(2, 2, ZeroPhases{}));
    CHECK(figure_preset("fig3a").spec == presets::expdiff(0.3, 6, EquidistributedPhases{std::numbers::pi}));
    CHECK(figure_preset("fig3b").spec == presets::expdiff(0.6, 6, EquidistributedPhases{std::numbers::pi}));
    CHECK(std::holds_alternative<SteinhausPhases>(figure_preset("fig4a").spec.phases));
    CHECK(figure_preset("fig5a").spec == presets::takagi(0.3, 2, ZeroPhases{}));
    CHECK(figure_preset("fig5c").spec == presets::takagi(1, 2, ZeroPhases{}));
    CHECK(figure_preset("fig6").spec == presets::dyadic_tau_zero(ZeroPhases{}));
    CHECK(figure_preset("fig1b").description == "weierstrass lambda=6 beta=0.7");
    CHECK(figure_presets().size() == 20);
    CHECK_THROWS_AS(figure_preset("fig7"), ValidationError);
}

TEST_CASE("rasterize fills a fixed canvas") {
    PointCloud pc;
    pc.push(0.0, 0.0);
    pc.push(1.0, 2.0);
    const Raster r = rasterize(pc, 64);
    CHECK(r.width == 64);
    CHECK(r.height == 64);
    CHECK(r.rgb.size() == 64u * 64u * 3u);
    CHECK(std::count(r.rgb.begin(), r.rgb.end(), 0) == 6);
}

TEST_CASE("cli exit codes and outputs") {
    const fs::path dir = scratch();
    CHECK(run_cli("predict --preset riemann --a 2 --b 2 --dimA 1 --out " + (dir / "p.json").string()) == cli::kExitOk);
    const json p = json::parse(slurp(dir / "p.json"));
    CHECK(p.at("complex").at("image_dim_lo").get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(p.at("complex").at("graph_dim_lo").get<double>() == doctest::Approx(4.0 / 3.0));
    CHECK(p.at("real_sine").at("graph_dim_lo").get<double>() == doctest::Approx(1.25));

    CHECK(run_cli("predict --preset weierstrass --beta 0.5 --dimA 1 --out " + (dir / "w.json").string()) == 0);
    CHECK(json::parse(slurp(dir / "w.json")).at("complex").at("image_dim_lo").get<double>() == 2.0);
    CHECK(run_cli("predict --preset weierstrass --beta 0.2 --dimA 1 --out " + (dir / "w2.json").string()) == 0);
    CHECK(json::parse(slurp(dir / "w2.json")).at("complex").at("has_interior") == "yes-a.s.");

    json bad = weierstrass_config();
    bad["extra"] = 1;
    CHECK(run_cli("eval --config " + write_json("bad.json", bad).string()) == cli::kExitValidation);
    CHECK(run_cli("eval --bogus") == cli::kExitValidation);
    CHECK(run_cli("figure --preset fig9 --out " + (dir / "x.png").string()) == cli::kExitValidation);
    CHECK(run_cli("eval --config " + (dir / "missing.json").string()) == cli::kExitRuntime);

    const json inconsistent = json::parse(R"({
        "spec": {"preset": "weierstrass", "beta": 0.3, "lambda": 6}, "eps_tail": 0.5, "replicates": 2,
        "test_set": {"type": "interval", "lo": 0, "hi": 1, "points": 16384},
        "scales": {"j_min": 4, "j_max": 10}, "master_seed": 3})");
    CHECK(run_cli("dim --config " + write_json("inc.json", inconsistent).string() + " --out " +
                  (dir / "inc_out.json").string()) == cli::kExitInconsistent);
    CHECK(json::parse(slurp(dir / "inc_out.json")).at("verdict") == "inconsistent");
    CHECK(run_cli("dim --config " + write_json("null.json", null_graph_config()).string() + " --out " +
                  (dir / "null_out.json").string()) == cli::kExitOk);
}

TEST_CASE("cli figure writes a 1024x1024 PNG") {
    const fs::path out = scratch() / "fig5c.png";
    REQUIRE(run_cli("figure --preset fig5c --threads 2 --out " + out.string()) == 0);
    const std::string png = slurp(out);
    REQUIRE(png.size() > 24);
    CHECK(png.compare(0, 8, "\x89PNG\r\n\x1a\n") == 0);
    const auto be32 = [&](std::size_t at) {
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(png[at + i]);
        return v;
    };
    CHECK(be32(16) == 1024);
    CHECK(be32(20) == 1024);
}

TEST_CASE("cli outputs are identical across thread counts") {
    const fs::path dir = scratch();
    const fs::path cfg = write_json("det.json", weierstrass_config());
    json dimcfg = weierstrass_config();
    dimcfg["replicates"] = 3;
    dimcfg["scales"] = {{"j_min", 2}, {"j_max", 9}};
    const fs::path dcfg = write_json("det_dim.json", dimcfg);
    std::string csv0, json0;
    for (int t : {1, 4, 16}) {
        const std::string ts = std::to_string(t);
        REQUIRE(run_cli("eval --config " + cfg.string() + " --threads " + ts + " --out " +
                        (dir / ("e" + ts + ".csv")).string()) == 0);
        run_cli("dim --config " + dcfg.string() + " --threads " + ts + " --out " + (dir / ("d" + ts + ".json")).string());
        const std::string csv = slurp(dir / ("e" + ts + ".csv"));
        const std::string js = slurp(dir / ("d" + ts + ".json"));
        REQUIRE_FALSE(js.empty());
        if (t == 1) {
            csv0 = csv;
            json0 = js;
        }
        CHECK(csv == csv0);
        CHECK(js == json0);
    }
}
