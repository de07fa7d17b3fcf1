#include "continuized/cli.hpp"

#include "continuized/config.hpp"
#include "continuized/csv.hpp"
#include "continuized/ensemble.hpp"
#include "continuized/errors.hpp"
#include "continuized/graphs.hpp"
#include "continuized/presets.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace continuized {

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<double> horizon;
    std::string out;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o, bool with_config) {
    if (with_config) cmd->add_option("--config", o.config, "YAML experiment file")->required();
    cmd->add_option("--seed", o.seed, "master seed (overrides CONTINUIZED_SEED and the config)");
    cmd->add_option("--runs", o.runs, "number of runs");
    cmd->add_option("--horizon", o.horizon, "time horizon");
    cmd->add_option("--out", o.out, "CSV output path (default: stdout)");
    cmd->add_flag("--quiet", o.quiet, "no summary on stderr");
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("CONTINUIZED_SEED");
    if (!raw || !*raw) return std::nullopt;
    std::istringstream in(raw);
    std::uint64_t v = 0;
    std::string rest;
    if (!(in >> v) || (in >> rest) || std::string(raw).front() == '-') {
        throw ConfigError({"CONTINUIZED_SEED: expected a non-negative integer, got '" + std::string(raw) + "'"});
    }
    return v;
}

void apply_overrides(ExperimentSpec& spec, const Overrides& o) {
    if (auto s = env_seed()) spec.seed = *s;
    if (o.seed) spec.seed = *o.seed;
    if (o.runs) spec.runs = *o.runs;
    if (o.horizon) {
        spec.horizon = *o.horizon;
        spec.checkpoint_list.clear();
    }
    if (!o.out.empty()) spec.output_path = o.out;
    spec.validate();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int run_spec(ExperimentSpec spec, const Overrides& o, std::ostream& out, std::ostream& err) {
    apply_overrides(spec, o);
    std::optional<PreparedExperiment> prepared;
    try {
        prepared.emplace(spec);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError({e.what()});
    }
    const RunSet set = run_prepared(*prepared);
    if (spec.output_path.empty()) {
        write_csv(set, out);
    } else {
        emit_csv(set, spec.output_path);
    }
    if (!o.quiet) {
        err << (spec.name.empty() ? std::string(to_string(spec.kind)) : spec.name) << ": " << spec.runs
            << " runs, seed " << spec.seed << ", " << set.rows.size() << " rows";
        if (!spec.output_path.empty()) err << " -> " << spec.output_path;
        err << '\n';
    }
    return kExitOk;
}

void print_graph_info(const Graph& g, std::ostream& out) {
    const SpectralCache cache = spectral(g);
    const GossipRates rates = gossip_rates(cache);
    out << "graph: " << g.description << '\n'
        << "nodes: " << g.node_count() << '\n'
        << "edges: " << g.edge_count() << '\n'
        << "mu_gossip: " << fmt(cache.mu_gossip) << '\n'
        << "r_max: " << fmt(cache.r_max) << '\n'
        << "theta_rg: " << fmt(rates.theta_rg) << '\n'
        << "theta_arg: " << fmt(rates.theta_arg) << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Continuized acceleration simulator", "continuized"};
    app.require_subcommand(1);

    Overrides opt;
    Overrides gos;
    Overrides dec;
    Overrides rep;
    auto* optimize = app.add_subcommand("optimize", "run a continuized optimisation ensemble");
    add_common(optimize, opt, true);
    auto* gossip = app.add_subcommand("gossip", "run a gossip averaging ensemble");
    add_common(gossip, gos, true);
    auto* decentralized = app.add_subcommand("decentralized", "run a decentralized optimisation ensemble");
    add_common(decentralized, dec, true);

    auto* info = app.add_subcommand("graph-info", "print spectral quantities of a graph");
    std::string info_config;
    GraphSpec info_graph;
    std::string edges_file;
    info->add_option("--config", info_config, "YAML file with a graph block");
    info->add_option("--topology", info_graph.topology, "line | cycle | grid | complete | edges");
    info->add_option("--nodes", info_graph.nodes, "node count (line, cycle, complete)");
    info->add_option("--rows", info_graph.rows, "grid rows");
    info->add_option("--cols", info_graph.cols, "grid columns");
    info->add_option("--edges", edges_file, "file with 'v w p' lines");

    auto* reproduce = app.add_subcommand("reproduce", "run a named preset");
    std::string preset_name;
    bool list = false;
    reproduce->add_option("preset", preset_name, "preset name");
    reproduce->add_flag("--list", list, "list presets");
    add_common(reproduce, rep, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        err << app.help();
        return kExitValidation;
    }

    try {
        auto check_kind = [](const ExperimentSpec& s, ExperimentKind want) {
            if (s.kind != want) {
                throw ConfigError({"kind: config describes a '" + std::string(to_string(s.kind)) +
                                   "' experiment, expected '" + std::string(to_string(want)) + "'"});
            }
        };
        if (*optimize) {
            auto spec = parse_config(opt.config);
            check_kind(spec, ExperimentKind::optimize);
            return run_spec(std::move(spec), opt, out, err);
        }
        if (*gossip) {
            auto spec = parse_config(gos.config);
            check_kind(spec, ExperimentKind::gossip);
            return run_spec(std::move(spec), gos, out, err);
        }
        if (*decentralized) {
            auto spec = parse_config(dec.config);
            check_kind(spec, ExperimentKind::decentralized);
            return run_spec(std::move(spec), dec, out, err);
        }
        if (*reproduce) {
            if (list) {
                for (const auto& n : preset_names()) out << n << '\n';
                return kExitOk;
            }
            if (preset_name.empty()) throw ConfigError({"reproduce: preset name required (see --list)"});
            return run_spec(preset(preset_name), rep, out, err);
        }
        if (*info) {
            GraphSpec g = info_graph;
            if (!info_config.empty()) {
                g = parse_config(info_config).gossip.graph;
            } else if (!edges_file.empty()) {
                std::ifstream in(edges_file);
                if (!in) throw ConfigError({"--edges: cannot read '" + edges_file + "'"});
                std::ostringstream buf;
                buf << in.rdbuf();
                g.topology = "edges";
                g.edges = buf.str();
            }
            ExperimentSpec probe;
            probe.kind = ExperimentKind::graph_info;
            probe.gossip.graph = g;
            probe.validate();
            Graph graph = [&] {
                try {
                    return graph_from_spec(g);
                } catch (const Error& e) {
                    throw ConfigError({std::string("graph: ") + e.what()});
                }
            }();
            print_graph_info(graph, out);
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace continuized
