#include "continuized/config.hpp"

#include "continuized/trace.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace continuized {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "invalid configuration";
    for (const auto& s : v) out += "\n  " + s;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
    case ExperimentKind::optimize: return "optimize";
    case ExperimentKind::gossip: return "gossip";
    case ExperimentKind::decentralized: return "decentralized";
    case ExperimentKind::graph_info: return "graph-info";
    }
    return "unknown";
}

std::vector<double> ExperimentSpec::checkpoints() const {
    if (!checkpoint_list.empty()) return checkpoint_list;
    if (checkpoint_count == 0) return {};
    const double first = std::min(1.0, horizon);
    if (checkpoint_count == 1 || first == horizon) return {horizon};
    return spacing == Spacing::log ? log_spaced(first, horizon, checkpoint_count)
                                   : lin_spaced(first, horizon, checkpoint_count);
}

std::vector<std::string> ExperimentSpec::violations() const {
    std::vector<std::string> v;
    if (!(horizon > 0.0) || !std::isfinite(horizon)) v.push_back("horizon: must be positive and finite");
    if (runs < 1) v.push_back("runs: must be at least 1");
    for (std::size_t i = 0; i < checkpoint_list.size(); ++i) {
        const double t = checkpoint_list[i];
        if (!(t >= 0.0) || (std::isfinite(horizon) && t > horizon)) {
            v.push_back("checkpoints.times[" + std::to_string(i) + "]: must lie in [0, horizon]");
        }
        if (i > 0 && !(t > checkpoint_list[i - 1])) {
            v.push_back("checkpoints.times[" + std::to_string(i) + "]: must be strictly increasing");
        }
    }
    auto check_graph = [&](const GraphSpec& g, const std::string& at) {
        if (g.topology == "line" || g.topology == "complete") {
            if (g.nodes < 2) v.push_back(at + ".nodes: needs at least 2 nodes");
        } else if (g.topology == "cycle") {
            if (g.nodes < 3) v.push_back(at + ".nodes: a cycle needs at least 3 nodes");
        } else if (g.topology == "grid") {
            if (g.rows < 1 || g.cols < 1 || g.rows * g.cols < 2) v.push_back(at + ".rows/cols: grid needs at least 2 nodes");
        } else if (g.topology == "edges") {
            if (g.edges.empty()) v.push_back(at + ".edges: edge list is empty");
        } else {
            v.push_back(at + ".topology: unknown topology '" + g.topology + "'");
        }
    };
    switch (kind) {
    case ExperimentKind::optimize: {
        const ProblemSpec& p = optimize.problem;
        if (p.kind == "quadratic") {
            if (p.diag.empty()) v.push_back("problem.diag: required for a quadratic problem");
            if (p.center.size() != p.diag.size()) v.push_back("problem.center: must have the same length as problem.diag");
            for (const double d : p.diag) {
                if (!(d > 0.0)) {
                    v.push_back("problem.diag: entries must be positive");
                    break;
                }
            }
        } else if (p.kind == "least_squares") {
            if (p.samples.empty()) v.push_back("problem.samples: required for a least_squares problem");
        } else if (p.kind == "appendix_convex") {
            if (p.dimension < 1) v.push_back("problem.dimension: must be at least 1");
        } else if (p.kind == "appendix_strongly_convex") {
            if (!(p.mu > 0.0) || !(p.L >= p.mu)) v.push_back("problem.mu/L: need 0 < mu <= L");
        } else {
            v.push_back("problem.kind: unknown problem kind '" + p.kind + "'");
        }
        if (optimize.noise.kind == NoiseKind::additive && !(optimize.noise.sigma2 >= 0.0)) {
            v.push_back("noise.sigma2: must be >= 0");
        }
        if (optimize.start != "zero" && optimize.start != "optimum" && optimize.start != "explicit") {
            v.push_back("start: must be 'zero', 'optimum' or a list");
        }
        const EventClock& c = optimize.clock;
        if (c.kind == EventClock::Kind::exponential && !(c.rate > 0.0)) v.push_back("clock.rate: must be positive");
        if (c.kind == EventClock::Kind::geometric) {
            if (!(c.p > 0.0 && c.p <= 1.0)) v.push_back("clock.p: must lie in (0, 1]");
            if (!(c.tick > 0.0)) v.push_back("clock.tick: must be positive");
        }
        break;
    }
    case ExperimentKind::gossip:
        check_graph(gossip.graph, "graph");
        if (gossip.algo != "accelerated" && gossip.algo != "naive" && gossip.algo != "both") {
            v.push_back("algo: must be accelerated, naive or both");
        }
        break;
    case ExperimentKind::decentralized:
        check_graph(decentralized.graph, "graph");
        if (!(decentralized.mu > 0.0) || !(decentralized.L >= decentralized.mu)) v.push_back("mu/L: need 0 < mu <= L");
        if (decentralized.dimension < 1) v.push_back("dimension: must be at least 1");
        for (std::size_t i = 0; i < decentralized.nodes.size(); ++i) {
            const auto& n = decentralized.nodes[i];
            const std::string at = "local_functions[" + std::to_string(i) + "]";
            if (!(n.curvature >= decentralized.mu && n.curvature <= decentralized.L)) {
                v.push_back(at + ".curvature: must lie in [mu, L]");
            }
            if (n.center.size() != decentralized.dimension) v.push_back(at + ".center: length must equal dimension");
        }
        break;
    case ExperimentKind::graph_info:
        check_graph(gossip.graph, "graph");
        break;
    }
    return v;
}

void ExperimentSpec::validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(std::move(v));
}

namespace {

class Reader {
public:
    std::vector<std::string> errors;

    /// Flags keys of `node` outside `allowed`.
    void keys(const YAML::Node& node, const std::string& at, std::initializer_list<const char*> allowed) {
        if (!node.IsMap()) {
            errors.push_back((at.empty() ? std::string("document") : at) + ": expected a mapping");
            return;
        }
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!ok.count(key)) errors.push_back(path(at, key) + ": unknown key");
        }
    }

    template <class T>
    void get(const YAML::Node& node, const char* key, const std::string& at, T& out) {
        const YAML::Node n = node[key];
        if (!n) return;
        try {
            out = n.as<T>();
        } catch (const YAML::Exception&) {
            errors.push_back(path(at, key) + ": expected " + type_name<T>());
        }
    }

    template <class T>
    void get(const YAML::Node& node, const char* key, const std::string& at, std::optional<T>& out) {
        const YAML::Node n = node[key];
        if (!n) return;
        T value{};
        get(node, key, at, value);
        out = value;
    }

    static std::string path(const std::string& at, const std::string& key) {
        return at.empty() ? key : at + "." + key;
    }

private:
    template <class T>
    static const char* type_name() {
        if constexpr (std::is_same_v<T, std::string>) return "a string";
        else if constexpr (std::is_same_v<T, bool>) return "a boolean";
        else if constexpr (std::is_floating_point_v<T>) return "a number";
        else if constexpr (std::is_integral_v<T>) return "a non-negative integer";
        else return "a list of numbers";
    }
};

std::optional<ScheduleKind> schedule_kind(const std::string& s) {
    for (auto k : {ScheduleKind::convex, ScheduleKind::strongly_convex, ScheduleKind::multiplicative_convex,
                   ScheduleKind::multiplicative_strongly_convex, ScheduleKind::coordinate_convex,
                   ScheduleKind::coordinate_strongly_convex}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

void read_graph(Reader& r, const YAML::Node& root, GraphSpec& g) {
    const YAML::Node n = root["graph"];
    if (!n) {
        r.errors.push_back("graph: required");
        return;
    }
    r.keys(n, "graph", {"topology", "nodes", "rows", "cols", "edges"});
    if (!n.IsMap()) return;
    if (!n["topology"]) r.errors.push_back("graph.topology: required");
    r.get(n, "topology", "graph", g.topology);
    r.get(n, "nodes", "graph", g.nodes);
    r.get(n, "rows", "graph", g.rows);
    r.get(n, "cols", "graph", g.cols);
    r.get(n, "edges", "graph", g.edges);
}

void read_problem(Reader& r, const YAML::Node& root, ProblemSpec& p) {
    const YAML::Node n = root["problem"];
    if (!n) {
        r.errors.push_back("problem: required");
        return;
    }
    r.keys(n, "problem", {"kind", "diag", "center", "samples", "dimension", "mu", "L"});
    if (!n.IsMap()) return;
    r.get(n, "kind", "problem", p.kind);
    r.get(n, "diag", "problem", p.diag);
    r.get(n, "center", "problem", p.center);
    r.get(n, "dimension", "problem", p.dimension);
    r.get(n, "mu", "problem", p.mu);
    r.get(n, "L", "problem", p.L);
    if (const YAML::Node s = n["samples"]) {
        if (!s.IsSequence()) {
            r.errors.push_back("problem.samples: expected a list");
            return;
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string at = "problem.samples[" + std::to_string(i) + "]";
            r.keys(s[i], at, {"a", "b", "weight"});
            if (!s[i].IsMap()) continue;
            std::vector<double> a;
            Sample sample;
            r.get(s[i], "a", at, a);
            r.get(s[i], "b", at, sample.b);
            r.get(s[i], "weight", at, sample.weight);
            sample.a = Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
            p.samples.push_back(std::move(sample));
        }
    }
}

void read_optimize(Reader& r, const YAML::Node& root, OptimizeSpec& o) {
    read_problem(r, root, o.problem);
    if (const YAML::Node n = root["noise"]) {
        r.keys(n, "noise", {"kind", "sigma2"});
        std::string kind = "none";
        r.get(n, "kind", "noise", kind);
        r.get(n, "sigma2", "noise", o.noise.sigma2);
        if (kind == "none") o.noise.kind = NoiseKind::none;
        else if (kind == "additive") o.noise.kind = NoiseKind::additive;
        else if (kind == "multiplicative") o.noise.kind = NoiseKind::multiplicative;
        else r.errors.push_back("noise.kind: must be none, additive or multiplicative");
    }
    if (const YAML::Node n = root["schedule"]) {
        r.keys(n, "schedule", {"kind", "L", "mu", "r_squared", "kappa_tilde"});
        std::string kind = std::string(to_string(o.schedule.kind));
        r.get(n, "kind", "schedule", kind);
        if (auto k = schedule_kind(kind)) o.schedule.kind = *k;
        else r.errors.push_back("schedule.kind: unknown schedule '" + kind + "'");
        r.get(n, "L", "schedule", o.schedule.L);
        r.get(n, "mu", "schedule", o.schedule.mu);
        r.get(n, "r_squared", "schedule", o.schedule.r_squared);
        r.get(n, "kappa_tilde", "schedule", o.schedule.kappa_tilde);
    } else {
        r.errors.push_back("schedule: required");
    }
    if (const YAML::Node n = root["clock"]) {
        r.keys(n, "clock", {"kind", "rate", "p", "tick"});
        std::string kind = "exponential";
        r.get(n, "kind", "clock", kind);
        if (kind == "exponential") o.clock.kind = EventClock::Kind::exponential;
        else if (kind == "geometric") o.clock.kind = EventClock::Kind::geometric;
        else r.errors.push_back("clock.kind: must be exponential or geometric");
        r.get(n, "rate", "clock", o.clock.rate);
        r.get(n, "p", "clock", o.clock.p);
        r.get(n, "tick", "clock", o.clock.tick);
    }
    if (const YAML::Node n = root["start"]) {
        if (n.IsSequence()) {
            o.start = "explicit";
            r.get(root, "start", "", o.start_point);
        } else {
            r.get(root, "start", "", o.start);
            if (o.start == "explicit") r.errors.push_back("start: give the explicit point as a list");
        }
    }
    r.get(root, "baselines", "", o.baselines);
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError({"syntax error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg});
    }
    Reader r;
    ExperimentSpec spec;
    if (!root.IsMap()) throw ConfigError({"document: expected a mapping of settings"});

    std::string kind;
    if (!root["kind"]) r.errors.push_back("kind: required");
    r.get(root, "kind", "", kind);
    if (kind == "optimize") spec.kind = ExperimentKind::optimize;
    else if (kind == "gossip") spec.kind = ExperimentKind::gossip;
    else if (kind == "decentralized") spec.kind = ExperimentKind::decentralized;
    else if (kind == "graph-info") spec.kind = ExperimentKind::graph_info;
    else if (!kind.empty()) r.errors.push_back("kind: must be optimize, gossip, decentralized or graph-info");

    const std::initializer_list<const char*> common = {"name", "kind", "horizon", "runs", "seed",
                                                       "checkpoints", "output", "bounds"};
    std::vector<const char*> allowed(common);
    switch (spec.kind) {
    case ExperimentKind::optimize:
        allowed.insert(allowed.end(), {"problem", "noise", "schedule", "clock", "start", "baselines"});
        break;
    case ExperimentKind::gossip:
        allowed.insert(allowed.end(), {"graph", "algo", "spike", "init"});
        break;
    case ExperimentKind::decentralized:
        allowed.insert(allowed.end(), {"graph", "mu", "L", "dimension", "local_functions", "function_seed"});
        break;
    case ExperimentKind::graph_info:
        allowed.insert(allowed.end(), {"graph"});
        break;
    }
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
            r.errors.push_back(key + ": unknown key");
        }
    }

    r.get(root, "name", "", spec.name);
    r.get(root, "horizon", "", spec.horizon);
    r.get(root, "runs", "", spec.runs);
    r.get(root, "seed", "", spec.seed);
    r.get(root, "output", "", spec.output_path);
    r.get(root, "bounds", "", spec.bounds);
    if (const YAML::Node c = root["checkpoints"]) {
        if (c.IsScalar()) {
            r.get(root, "checkpoints", "", spec.checkpoint_count);
        } else {
            r.keys(c, "checkpoints", {"count", "spacing", "times"});
            if (c.IsMap()) {
                r.get(c, "count", "checkpoints", spec.checkpoint_count);
                std::string spacing = "log";
                r.get(c, "spacing", "checkpoints", spacing);
                if (spacing == "log") spec.spacing = Spacing::log;
                else if (spacing == "linear") spec.spacing = Spacing::linear;
                else r.errors.push_back("checkpoints.spacing: must be log or linear");
                r.get(c, "times", "checkpoints", spec.checkpoint_list);
                if (c["times"] && spec.checkpoint_list.empty()) spec.checkpoint_count = 0;
            }
        }
    }

    switch (spec.kind) {
    case ExperimentKind::optimize:
        read_optimize(r, root, spec.optimize);
        break;
    case ExperimentKind::gossip:
        read_graph(r, root, spec.gossip.graph);
        r.get(root, "algo", "", spec.gossip.algo);
        r.get(root, "spike", "", spec.gossip.spike);
        r.get(root, "init", "", spec.gossip.init);
        break;
    case ExperimentKind::decentralized: {
        auto& d = spec.decentralized;
        read_graph(r, root, d.graph);
        r.get(root, "mu", "", d.mu);
        r.get(root, "L", "", d.L);
        r.get(root, "dimension", "", d.dimension);
        r.get(root, "function_seed", "", d.function_seed);
        if (const YAML::Node lf = root["local_functions"]) {
            if (!lf.IsSequence()) {
                r.errors.push_back("local_functions: expected a list");
            } else {
                for (std::size_t i = 0; i < lf.size(); ++i) {
                    const std::string at = "local_functions[" + std::to_string(i) + "]";
                    r.keys(lf[i], at, {"curvature", "center"});
                    if (!lf[i].IsMap()) continue;
                    LocalSpec ls{0.0, {}};
                    r.get(lf[i], "curvature", at, ls.curvature);
                    r.get(lf[i], "center", at, ls.center);
                    d.nodes.push_back(std::move(ls));
                }
            }
        }
        break;
    }
    case ExperimentKind::graph_info:
        read_graph(r, root, spec.gossip.graph);
        break;
    }

    // Semantic checks on fields that parsed, skipping those already reported.
    const auto field = [](const std::string& msg) { return msg.substr(0, msg.find(':')); };
    const std::size_t parsed_errors = r.errors.size();
    for (auto& v : spec.violations()) {
        bool covered = false;
        for (std::size_t i = 0; i < parsed_errors; ++i) {
            const std::string f = field(r.errors[i]);
            if (field(v).rfind(f, 0) == 0) covered = true;
        }
        if (!covered) r.errors.push_back(std::move(v));
    }
    if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
    return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace continuized
