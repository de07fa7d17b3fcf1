#include "continuized/reference.hpp"

#include "continuized/errors.hpp"

namespace continuized::reference {

RunSet run_prepared_serial(const PreparedExperiment& prepared) {
    std::vector<Trace> traces;
    traces.reserve(prepared.spec().runs);
    for (std::size_t i = 0; i < prepared.spec().runs; ++i) {
        try {
            traces.push_back(prepared.run(i));
        } catch (const std::exception& e) {
            throw Error("run " + std::to_string(i) + ": " + e.what());
        }
    }
    return assemble_runset(prepared, std::move(traces));
}

RunSet run_experiment_serial(const ExperimentSpec& spec) {
    return run_prepared_serial(PreparedExperiment(spec));
}

namespace {

void check_grid(std::span<const double> checkpoints, double horizon) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (!(checkpoints[i] >= 0.0) || checkpoints[i] > horizon ||
            (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))) {
            throw InvalidArgument("checkpoints must be increasing and within [0, horizon]");
        }
    }
}

}  // namespace

GossipResult run_gossip_eager(const Graph& graph, const GossipParams& params, const NodeMatrix& x0,
                              double horizon, std::span<const GossipEvent> events,
                              std::span<const double> checkpoints) {
    check_grid(checkpoints, horizon);
    const double rate = params.rate();
    GossipResult result;
    result.trace.metrics = {kEnergyMetric};
    GossipNetworkState state = GossipNetworkState::init(x0);
    std::size_t next_cp = 0;
    auto record = [&](double t) {
        GossipNetworkState copy = state;
        synchronize(copy, t, rate);
        result.trace.checkpoints.push_back({t, state.event_count, {gossip_energy(copy, t, 0.0)}});
    };
    for (const GossipEvent& e : events) {
        while (next_cp < checkpoints.size() && checkpoints[next_cp] < e.time) record(checkpoints[next_cp++]);
        if (e.time > horizon) break;
        synchronize(state, e.time, rate);
        apply_event(state, graph, params, e);
    }
    while (next_cp < checkpoints.size()) record(checkpoints[next_cp++]);
    synchronize(state, horizon, rate);
    result.terminal = std::move(state);
    return result;
}

DecentralizedResult run_decentralized_eager(const Graph& graph, std::span<const LocalFunction> functions,
                                            const DualParams& params, double horizon,
                                            std::span<const GossipEvent> events,
                                            std::span<const double> checkpoints) {
    check_grid(checkpoints, horizon);
    if (functions.size() != graph.node_count()) {
        throw DimensionMismatch("local functions", graph.node_count(), functions.size());
    }
    DecentralizedResult result;
    result.optimum = quadratic_consensus_optimum(functions);
    result.trace.metrics = {kDualDistMetric};
    DualState state = DualState::zeros(graph.node_count(), functions.front().dimension());
    auto mix_all = [&](DualState& s, double t) {
        for (std::size_t v = 0; v < graph.node_count(); ++v) lazy_mix_dual_node(s, v, t, params.eta);
    };
    std::size_t next_cp = 0;
    auto record = [&](double t) {
        DualState copy = state;
        mix_all(copy, t);
        result.trace.checkpoints.push_back(
            {t, state.event_count, {dual_distance(copy, functions, result.optimum, t, 0.0)}});
    };
    for (const GossipEvent& e : events) {
        while (next_cp < checkpoints.size() && checkpoints[next_cp] < e.time) record(checkpoints[next_cp++]);
        if (e.time > horizon) break;
        mix_all(state, e.time);
        apply_dual_event(state, graph, params, functions, e);
    }
    while (next_cp < checkpoints.size()) record(checkpoints[next_cp++]);
    mix_all(state, horizon);
    state.t = horizon;
    result.terminal = std::move(state);
    return result;
}

}  // namespace continuized::reference
