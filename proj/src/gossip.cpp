#include "continuized/gossip.hpp"

#include "continuized/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace continuized {

GossipEvent next_event(const Graph& graph, RunRng& rng, double t_now) {
    const double dt = -std::log(rng.clock.uniform_open_zero());
    return {t_now + dt, rng.marks.categorical(graph.cumulative())};
}

GossipEvent ReplayEvents::next(double t_now) {
    if (pos_ >= events_.size()) return {std::numeric_limits<double>::infinity(), 0};
    const GossipEvent e = events_[pos_++];
    if (e.time < t_now) throw InvalidArgument("replayed events must be in non-decreasing time order");
    return e;
}

std::vector<GossipEvent> sample_events(const Graph& graph, RunRng& rng, double horizon) {
    std::vector<GossipEvent> out;
    double t = 0.0;
    for (;;) {
        const GossipEvent e = next_event(graph, rng, t);
        if (e.time > horizon) break;
        out.push_back(e);
        t = e.time;
    }
    return out;
}

GossipNetworkState GossipNetworkState::init(const NodeMatrix& x0) {
    if (x0.rows() < 1 || x0.cols() < 1) throw InvalidArgument("gossip state needs at least one node");
    GossipNetworkState s;
    s.x = x0;
    s.z = x0;
    s.last_t.assign(static_cast<std::size_t>(x0.rows()), 0.0);
    s.target = x0.colwise().mean();
    return s;
}

GossipNetworkState GossipNetworkState::init(const Vector& x0) {
    NodeMatrix m = x0;
    return init(m);
}

GossipParams GossipParams::from_spectral(const SpectralCache& cache, GossipAlgo algo) {
    GossipParams p;
    p.mix_rate = std::sqrt(cache.mu_gossip / (2.0 * cache.r_max));
    p.z_step = 1.0 / std::sqrt(2.0 * cache.mu_gossip * cache.r_max);
    p.algo = algo;
    return p;
}

namespace {

void check_edge(const GossipNetworkState& state, const Graph& graph, std::size_t v, std::size_t w) {
    if (state.node_count() != graph.node_count()) {
        throw DimensionMismatch("gossip state", graph.node_count(), state.node_count());
    }
    if (!graph.find_edge(v, w)) throw EdgeNotFound(v, w);
}

}  // namespace

void naive_step(GossipNetworkState& state, const Graph& graph, std::size_t v, std::size_t w) {
    check_edge(state, graph, v, w);
    const auto a = static_cast<Eigen::Index>(v);
    const auto b = static_cast<Eigen::Index>(w);
    const Eigen::RowVectorXd mid = 0.5 * (state.x.row(a) + state.x.row(b));
    state.x.row(a) = mid;
    state.x.row(b) = mid;
}

void lazy_mix_node(GossipNetworkState& state, std::size_t v, double to_t, double rate) {
    const double from = state.last_t.at(v);
    if (to_t < from) {
        throw InvalidArgument("lazy_mix_node: node " + std::to_string(v) + " is already at t = " +
                              std::to_string(from));
    }
    if (to_t == from) return;
    const auto a = static_cast<Eigen::Index>(v);
    if (rate > 0.0) {
        const double decay = std::exp(-2.0 * rate * (to_t - from));
        const Eigen::RowVectorXd mid = 0.5 * (state.x.row(a) + state.z.row(a));
        state.x.row(a) = mid + decay * (state.x.row(a) - mid);
        state.z.row(a) = mid + decay * (state.z.row(a) - mid);
    }
    state.last_t[v] = to_t;
}

void accelerated_step(GossipNetworkState& state, const Graph& graph, std::size_t v,
                      std::size_t w, const GossipParams& params, double t_event) {
    check_edge(state, graph, v, w);
    if (state.last_t[v] != t_event || state.last_t[w] != t_event) {
        throw InvalidArgument("accelerated_step: endpoints must be mixed to the event time first");
    }
    const auto a = static_cast<Eigen::Index>(v);
    const auto b = static_cast<Eigen::Index>(w);
    const Eigen::RowVectorXd diff = state.x.row(a) - state.x.row(b);
    const Eigen::RowVectorXd mid = 0.5 * (state.x.row(a) + state.x.row(b));
    state.x.row(a) = mid;
    state.x.row(b) = mid;
    state.z.row(a) -= params.z_step * diff;
    state.z.row(b) += params.z_step * diff;
}

void apply_event(GossipNetworkState& state, const Graph& graph, const GossipParams& params,
                 const GossipEvent& event) {
    const Edge& e = graph.edges().at(event.edge);
    const double rate = params.rate();
    lazy_mix_node(state, e.v, event.time, rate);
    lazy_mix_node(state, e.w, event.time, rate);
    if (params.algo == GossipAlgo::accelerated) {
        accelerated_step(state, graph, e.v, e.w, params, event.time);
    } else {
        naive_step(state, graph, e.v, e.w);
    }
    state.t = event.time;
    ++state.event_count;
}

namespace {

NodeMatrix synchronized(const GossipNetworkState& state, double t, double rate, bool want_x) {
    NodeMatrix out = want_x ? state.x : state.z;
    if (!(rate > 0.0)) return out;
    for (Eigen::Index v = 0; v < out.rows(); ++v) {
        const double from = state.last_t[static_cast<std::size_t>(v)];
        if (t < from) throw InvalidArgument("cannot synchronize to a time before a node's last update");
        const double decay = std::exp(-2.0 * rate * (t - from));
        const Eigen::RowVectorXd mid = 0.5 * (state.x.row(v) + state.z.row(v));
        out.row(v) = mid + decay * (out.row(v) - mid);
    }
    return out;
}

}  // namespace

NodeMatrix synchronized_x(const GossipNetworkState& state, double t, double rate) {
    return synchronized(state, t, rate, true);
}

NodeMatrix synchronized_z(const GossipNetworkState& state, double t, double rate) {
    return synchronized(state, t, rate, false);
}

void synchronize(GossipNetworkState& state, double t, double rate) {
    for (std::size_t v = 0; v < state.node_count(); ++v) lazy_mix_node(state, v, t, rate);
    state.t = std::max(state.t, t);
}

double gossip_energy(const GossipNetworkState& state, double t, double rate) {
    const NodeMatrix x = synchronized_x(state, t, rate);
    return 0.5 * (x.rowwise() - state.target).squaredNorm();
}

GossipResult run_gossip(const Graph& graph, const GossipParams& params, const NodeMatrix& x0,
                        double horizon, EventSource& events, std::span<const double> checkpoints) {
    if (static_cast<std::size_t>(x0.rows()) != graph.node_count()) {
        throw DimensionMismatch("gossip initial values", graph.node_count(),
                                static_cast<std::size_t>(x0.rows()));
    }
    if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (!(checkpoints[i] >= 0.0) || checkpoints[i] > horizon ||
            (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))) {
            throw InvalidArgument("checkpoints must be increasing and within [0, horizon]");
        }
    }
    const double rate = params.rate();
    GossipResult result;
    result.trace.metrics = {kEnergyMetric};
    result.trace.checkpoints.reserve(checkpoints.size());
    GossipNetworkState state = GossipNetworkState::init(x0);

    std::size_t next_cp = 0;
    auto record = [&](double t) {
        result.trace.checkpoints.push_back({t, state.event_count, {gossip_energy(state, t, rate)}});
    };
    for (;;) {
        const GossipEvent e = events.next(state.t);
        while (next_cp < checkpoints.size() && checkpoints[next_cp] < e.time) record(checkpoints[next_cp++]);
        if (e.time > horizon) break;
        apply_event(state, graph, params, e);
    }
    while (next_cp < checkpoints.size()) record(checkpoints[next_cp++]);
    synchronize(state, horizon, rate);
    result.terminal = std::move(state);
    return result;
}

GossipResult run_gossip(const Graph& graph, const GossipParams& params, const Vector& x0,
                        double horizon, RunRng& rng, std::span<const double> checkpoints) {
    RandomEvents events(graph, rng);
    NodeMatrix m = x0;
    return run_gossip(graph, params, m, horizon, events, checkpoints);
}

Vector spike_initialization(std::size_t node_count, std::size_t spike) {
    if (spike >= node_count) throw InvalidArgument("spike node out of range");
    Vector x = Vector::Zero(static_cast<Eigen::Index>(node_count));
    x[static_cast<Eigen::Index>(spike)] = 1.0;
    return x;
}

}  // namespace continuized
