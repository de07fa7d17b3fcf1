#include "continuized/cli.hpp"
#include "continuized/config.hpp"
#include "continuized/csv.hpp"
#include "continuized/ensemble.hpp"
#include "continuized/presets.hpp"
#include "continuized/reference.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace continuized;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "continuized");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "continuized_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kSmallOptimize = R"(
name: small
kind: optimize
horizon: 20
runs: 8
seed: 3
checkpoints: 5
problem:
  kind: quadratic
  diag: [1.0, 0.1, 0.01]
  center: [1.0, -1.0, 2.0]
schedule:
  kind: strongly_convex
)";

ExperimentSpec small_spec() { return parse_config_text(kSmallOptimize); }

std::string csv_of(const RunSet& s) {
    std::ostringstream o;
    write_csv(s, o);
    return o.str();
}

}  // namespace

TEST_CASE("config defaults and checkpoint grid") {
    const ExperimentSpec s = parse_config_text("kind: gossip\ngraph: {topology: line, nodes: 4}\n");
    CHECK(s.runs == 1000);
    CHECK(s.horizon == 100.0);
    CHECK(s.seed == 0);
    CHECK(s.gossip.algo == "both");
    const auto cps = s.checkpoints();
    REQUIRE(cps.size() == 50);
    CHECK(cps.front() == 1.0);
    CHECK(cps.back() == 100.0);
    CHECK(cps[1] / cps[0] == doctest::Approx(cps[2] / cps[1]));

    const auto lin = parse_config_text("kind: gossip\nhorizon: 10\ncheckpoints: {count: 3, spacing: linear}\n"
                                       "graph: {topology: line, nodes: 4}\n");
    CHECK(lin.checkpoints() == std::vector<double>{1.0, 5.5, 10.0});
    const auto none = parse_config_text("kind: gossip\ncheckpoints: 0\ngraph: {topology: cycle, nodes: 4}\n");
    CHECK(none.checkpoints().empty());
    const auto explicit_times = parse_config_text(
        "kind: gossip\ncheckpoints: {times: [0, 2.5, 7]}\ngraph: {topology: cycle, nodes: 4}\n");
    CHECK(explicit_times.checkpoints() == std::vector<double>{0.0, 2.5, 7.0});
}

TEST_CASE("config violations name the field") {
    auto violations = [](const std::string& text) {
        try {
            parse_config_text(text).validate();
        } catch (const ConfigError& e) {
            return e.violations();
        }
        return std::vector<std::string>{};
    };
    auto mentions = [](const std::vector<std::string>& v, const std::string& field) {
        for (const auto& s : v) {
            if (s.rfind(field, 0) == 0) return true;
        }
        return false;
    };
    CHECK(mentions(violations("kind: gossip\nhorizon: -1\ngraph: {topology: line, nodes: 4}\n"), "horizon"));
    CHECK(mentions(violations("kind: gossip\nhorizn: 5\ngraph: {topology: line, nodes: 4}\n"), "horizn"));
    CHECK(mentions(violations("kind: gossip\ngraph: {topology: star, nodes: 4}\n"), "graph.topology"));
    CHECK(mentions(violations("kind: gossip\ngraph: {topology: cycle, nodes: 2}\n"), "graph.nodes"));
    CHECK(mentions(violations("kind: optimize\nproblem: {kind: quadratic}\nschedule: {kind: convex}\n"),
                   "problem.diag"));
    CHECK(mentions(violations("kind: optimize\nproblem: {kind: appendix_convex}\n"), "schedule"));
    CHECK(mentions(violations("horizon: 3\n"), "kind"));
    CHECK(mentions(violations("kind: gossip\nruns: many\ngraph: {topology: line, nodes: 4}\n"), "runs"));
    CHECK(mentions(violations("kind: gossip\ncheckpoints: {times: [3, 1]}\ngraph: {topology: line, nodes: 4}\n"),
                   "checkpoints.times"));
    CHECK(mentions(violations("kind: decentralized\ngraph: {topology: line, nodes: 3}\nmu: 2\nL: 1\n"), "mu/L"));
    CHECK(mentions(violations("kind: optimize\nschedule: {kind: convex}\nproblem: {kind: appendix_convex}\n"
                              "noise: {kind: additive, sigma2: -1}\n"),
                   "noise.sigma2"));
    // Several problems are reported together.
    CHECK(violations("kind: gossip\nhorizon: 0\nruns: 0\ngraph: {topology: line, nodes: 1}\n").size() == 3);
    CHECK_THROWS_AS(parse_config_text("kind: [unclosed\n"), ConfigError);
    CHECK(violations(kSmallOptimize).empty());
}

TEST_CASE("presets") {
    const auto names = preset_names();
    CHECK(names.size() == 8);
    const ExperimentSpec sc = preset("appendix-a1-strongly-convex");
    CHECK(sc.optimize.problem.kind == "appendix_strongly_convex");
    CHECK(sc.optimize.problem.mu == 1e-2);
    CHECK(sc.optimize.problem.L == 1.0);
    CHECK(sc.runs == 1000);
    CHECK(preset("appendix-a2-grid225").gossip.graph.rows == 15);
    for (const auto& n : names) CHECK_NOTHROW(preset(n).validate());
    CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("ensemble determinism") {
    const ExperimentSpec spec = small_spec();
    const RunSet a = run_experiment(spec);
    const RunSet b = run_experiment(spec);
    const RunSet serial = reference::run_experiment_serial(spec);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(csv_of(a) == csv_of(serial));
    REQUIRE(a.traces.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(a.traces[i].series("gap") == serial.traces[i].series("gap"));

    ExperimentSpec other = spec;
    other.seed = 4;
    CHECK(csv_of(run_experiment(other)) != csv_of(a));

    ExperimentSpec one = spec;
    one.runs = 1;
    const RunSet single = run_experiment(one);
    const auto gap = single.traces[0].series("gap");
    for (std::size_t c = 0; c < gap.size(); ++c) {
        const auto& row = single.row(c, "gap");
        CHECK(row.mean == gap[c]);
        CHECK(row.q05 == gap[c]);
        CHECK(row.q95 == gap[c]);
    }
}

TEST_CASE("quantiles") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    CHECK(quantile_sorted(v, 0.0) == 1.0);
    CHECK(quantile_sorted(v, 1.0) == 5.0);
    CHECK(quantile_sorted(v, 0.5) == 3.0);
    CHECK(quantile_sorted(v, 0.05) == doctest::Approx(1.2));
    CHECK(quantile_sorted(std::vector<double>{7.0}, 0.95) == 7.0);
}

TEST_CASE("bounds are attached to optimisation metrics") {
    const ExperimentSpec spec = small_spec();
    const PreparedExperiment p(spec);
    REQUIRE(p.bound("gap", 5.0).has_value());
    CHECK(*p.bound("gap", 5.0) > *p.bound("gap", 10.0));
    CHECK_FALSE(p.bound("unknown", 1.0).has_value());

    ExperimentSpec no_bounds = spec;
    no_bounds.bounds = false;
    const RunSet s = run_experiment(no_bounds);
    CHECK_FALSE(s.has_bounds);
    CHECK(csv_of(s).rfind("t,metric,mean,q05,q95\n", 0) == 0);
}

TEST_CASE("csv output") {
    ExperimentSpec spec = small_spec();
    spec.checkpoint_list.clear();
    spec.checkpoint_count = 0;
    CHECK(csv_of(run_experiment(spec)) == "t,metric,mean,q05,q95,bound\n");

    spec.checkpoint_list = {4.0};
    const RunSet one = run_experiment(spec);
    const std::string text = csv_of(one);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(1 + one.metrics.size()));

    const RunSet full = run_experiment(small_spec());
    const fs::path path = fs::temp_directory_path() / "continuized_tests" / "round_trip.csv";
    fs::create_directories(path.parent_path());
    emit_csv(full, path);
    const auto rows = read_csv(path);
    REQUIRE(rows.size() == full.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].t == doctest::Approx(full.rows[i].t).epsilon(1e-11));
        CHECK(rows[i].metric == full.rows[i].metric);
        CHECK(rows[i].mean == doctest::Approx(full.rows[i].mean).epsilon(1e-11));
        CHECK(rows[i].bound.has_value() == full.rows[i].bound.has_value());
    }

    ExperimentSpec gossip = parse_config_text("kind: gossip\nruns: 4\nhorizon: 5\ncheckpoints: 3\n"
                                              "algo: naive\ngraph: {topology: cycle, nodes: 5}\n");
    const std::string g = csv_of(run_experiment(gossip));
    // The naive algorithm carries no bound, so its column stays blank.
    CHECK(g.find(",energy,") != std::string::npos);
    CHECK(g.find(",\n", g.find('\n')) != std::string::npos);
}

TEST_CASE("command line") {
    const fs::path cfg = write_temp("small.yaml", kSmallOptimize);
    const CliResult ok = cli({"optimize", "--config", cfg.string(), "--quiet"});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out == csv_of(run_experiment(small_spec())));
    CHECK(ok.err.empty());

    const CliResult summary = cli({"optimize", "--config", cfg.string(), "--runs", "2"});
    CHECK(summary.code == kExitOk);
    CHECK(summary.err.find("small: 2 runs") != std::string::npos);

    const fs::path out = fs::temp_directory_path() / "continuized_tests" / "cli_out.csv";
    fs::remove(out);
    CHECK(cli({"optimize", "--config", cfg.string(), "--out", out.string(), "--quiet"}).code == kExitOk);
    CHECK(read_file(out) == ok.out);

    const fs::path bad = write_temp("bad.yaml", "kind: optimize\nhorizon: -3\n");
    const CliResult rejected = cli({"optimize", "--config", bad.string()});
    CHECK(rejected.code == kExitValidation);
    CHECK(rejected.err.find("horizon") != std::string::npos);
    CHECK(cli({"gossip", "--config", cfg.string()}).code == kExitValidation);
    CHECK(cli({"optimize", "--config", "/nonexistent/x.yaml"}).code == kExitValidation);
    CHECK(cli({"frobnicate"}).code == kExitValidation);
    CHECK(cli({}).code == kExitValidation);
    CHECK(cli({"reproduce", "no-such-preset"}).code == kExitValidation);

    const CliResult list = cli({"reproduce", "--list"});
    CHECK(list.code == kExitOk);
    CHECK(list.out.find("appendix-a2-line30\n") != std::string::npos);
    const CliResult rep = cli({"reproduce", "appendix-a2-complete10", "--runs", "3", "--horizon", "10", "--quiet"});
    CHECK(rep.code == kExitOk);
    CHECK(rep.out.find("energy_accelerated") != std::string::npos);

    const CliResult info = cli({"graph-info", "--topology", "complete", "--nodes", "10"});
    CHECK(info.code == kExitOk);
    CHECK(info.out.find("mu_gossip: 0.222222222222\n") != std::string::npos);
    CHECK(info.out.find("r_max: 9\n") != std::string::npos);
    CHECK(info.out.find("theta_arg: 0.111111111111\n") != std::string::npos);
    const fs::path edges = write_temp("edges.txt", "# triangle\n0 1 1\n1 2 1\n0 2 1\n");
    const CliResult tri = cli({"graph-info", "--edges", edges.string()});
    CHECK(tri.code == kExitOk);
    CHECK(tri.out.find("edges: 3\n") != std::string::npos);
    CHECK(cli({"graph-info", "--topology", "line", "--nodes", "1"}).code == kExitValidation);
    const fs::path disconnected = write_temp("split.txt", "0 1 1\n2 3 1\n");
    CHECK(cli({"graph-info", "--edges", disconnected.string()}).code == kExitValidation);
}

TEST_CASE("seed precedence") {
    const fs::path cfg = write_temp("seeded.yaml", kSmallOptimize);
    auto run = [&](std::vector<std::string> extra) {
        std::vector<std::string> args{"optimize", "--config", cfg.string(), "--quiet"};
        args.insert(args.end(), extra.begin(), extra.end());
        return cli(args).out;
    };
    ExperimentSpec s = small_spec();
    s.seed = 11;
    const std::string seed11 = csv_of(run_experiment(s));
    s.seed = 12;
    const std::string seed12 = csv_of(run_experiment(s));

    ::setenv("CONTINUIZED_SEED", "11", 1);
    CHECK(run({}) == seed11);
    CHECK(run({"--seed", "12"}) == seed12);
    ::setenv("CONTINUIZED_SEED", "abc", 1);
    CHECK(cli({"optimize", "--config", cfg.string()}).code == kExitValidation);
    ::unsetenv("CONTINUIZED_SEED");
    CHECK(run({}) == csv_of(run_experiment(small_spec())));
}

TEST_CASE("installed binary") {
    const char* bin = std::getenv("CONTINUIZED_CLI");
    if (!bin) {
        MESSAGE("CONTINUIZED_CLI not set; skipping");
        return;
    }
    const fs::path cfg = write_temp("binary.yaml", kSmallOptimize);
    const fs::path out = fs::temp_directory_path() / "continuized_tests" / "binary.csv";
    auto status = [](const std::string& cmd) {
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status(std::string(bin) + " optimize --config " + cfg.string() + " --quiet --out " + out.string()) == 0);
    CHECK(read_file(out) == csv_of(run_experiment(small_spec())));
    CHECK(status(std::string(bin) + " optimize --config /nonexistent.yaml 2>/dev/null") == 1);
    CHECK(status(std::string(bin) + " graph-info --topology grid --rows 3 --cols 3 >/dev/null") == 0);
}
