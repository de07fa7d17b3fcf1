#include "continuized/presets.hpp"

#include <functional>
#include <map>

namespace continuized {

namespace {

ExperimentSpec optimize_base(const std::string& name, const std::string& problem, ScheduleKind kind,
                             double horizon) {
    ExperimentSpec s;
    s.name = name;
    s.kind = ExperimentKind::optimize;
    s.optimize.problem.kind = problem;
    s.optimize.schedule.kind = kind;
    s.optimize.baselines = true;
    s.horizon = horizon;
    return s;
}

ExperimentSpec gossip_base(const std::string& name, GraphSpec graph, double horizon) {
    ExperimentSpec s;
    s.name = name;
    s.kind = ExperimentKind::gossip;
    s.gossip.graph = std::move(graph);
    s.gossip.algo = "both";
    s.horizon = horizon;
    s.spacing = Spacing::linear;
    return s;
}

const std::map<std::string, std::function<ExperimentSpec()>, std::less<>>& registry() {
    static const std::map<std::string, std::function<ExperimentSpec()>, std::less<>> r = {
        {"appendix-a1-convex",
         [] { return optimize_base("appendix-a1-convex", "appendix_convex", ScheduleKind::convex, 100.0); }},
        {"appendix-a1-strongly-convex",
         [] {
             return optimize_base("appendix-a1-strongly-convex", "appendix_strongly_convex",
                                  ScheduleKind::strongly_convex, 300.0);
         }},
        {"appendix-b-additive-convex",
         [] {
             auto s = optimize_base("appendix-b-additive-convex", "appendix_convex", ScheduleKind::convex, 100.0);
             s.optimize.noise = NoiseModel::additive(1e-4 * 100);
             s.optimize.start = "optimum";
             s.optimize.baselines = false;
             return s;
         }},
        {"appendix-b-additive-strongly-convex",
         [] {
             auto s = optimize_base("appendix-b-additive-strongly-convex", "appendix_strongly_convex",
                                    ScheduleKind::strongly_convex, 300.0);
             s.optimize.noise = NoiseModel::additive(1e-4 * 3);
             s.optimize.start = "optimum";
             s.optimize.baselines = false;
             return s;
         }},
        {"appendix-a2-line30",
         [] { return gossip_base("appendix-a2-line30", {"line", 30, 0, 0, ""}, 3000.0); }},
        {"appendix-a2-grid225",
         [] { return gossip_base("appendix-a2-grid225", {"grid", 0, 15, 15, ""}, 10000.0); }},
        {"appendix-a2-complete10",
         [] { return gossip_base("appendix-a2-complete10", {"complete", 10, 0, 0, ""}, 200.0); }},
        {"decentralized-line10",
         [] {
             ExperimentSpec s;
             s.name = "decentralized-line10";
             s.kind = ExperimentKind::decentralized;
             s.decentralized.graph = {"line", 10, 0, 0, ""};
             s.decentralized.mu = 0.1;
             s.decentralized.L = 1.0;
             s.runs = 500;
             s.horizon = 800.0;
             s.spacing = Spacing::linear;
             s.bounds = false;
             return s;
         }},
    };
    return r;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, make] : registry()) out.push_back(name);
    return out;
}

ExperimentSpec preset(std::string_view name) {
    const auto& r = registry();
    const auto it = r.find(name);
    if (it == r.end()) {
        std::string known;
        for (const auto& [n, make] : r) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError({"unknown preset '" + std::string(name) + "' (known: " + known + ")"});
    }
    return it->second();
}

}  // namespace continuized
