#pragma once

#include "continuized/graphs.hpp"
#include "continuized/linalg.hpp"
#include "continuized/rng.hpp"
#include "continuized/trace.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace continuized {

/// One activation of the Poisson point measure dN(t, e).
struct GossipEvent {
    double time;
    std::size_t edge;
};

/// t_now + Exp(1) and an edge drawn from P (clock and mark streams respectively).
GossipEvent next_event(const Graph& graph, RunRng& rng, double t_now);

/// Produces the event sequence of a run, either sampled or replayed.
class EventSource {
public:
    virtual ~EventSource() = default;
    virtual GossipEvent next(double t_now) = 0;
};

class RandomEvents final : public EventSource {
public:
    RandomEvents(const Graph& graph, RunRng& rng) : graph_(graph), rng_(rng) {}
    GossipEvent next(double t_now) override { return next_event(graph_, rng_, t_now); }

private:
    const Graph& graph_;
    RunRng& rng_;
};

/// Replays a fixed sequence; past its end, returns an event at +infinity.
class ReplayEvents final : public EventSource {
public:
    explicit ReplayEvents(std::vector<GossipEvent> events) : events_(std::move(events)) {}
    GossipEvent next(double t_now) override;

private:
    std::vector<GossipEvent> events_;
    std::size_t pos_ = 0;
};

/// Samples the events of [0, horizon] up front.
std::vector<GossipEvent> sample_events(const Graph& graph, RunRng& rng, double horizon);

/// Per-node (x, z, last update time). Node values are rows (scalar gossip: one column).
struct GossipNetworkState {
    NodeMatrix x;
    NodeMatrix z;
    std::vector<double> last_t;
    double t = 0.0;
    Eigen::RowVectorXd target;  // mean of the initial values
    std::uint64_t event_count = 0;

    static GossipNetworkState init(const NodeMatrix& x0);
    static GossipNetworkState init(const Vector& x0);
    std::size_t node_count() const { return static_cast<std::size_t>(x.rows()); }
};

enum class GossipAlgo { naive, accelerated };

struct GossipParams {
    double mix_rate = 0.0;  // c = sqrt(mu_gossip / (2 R_max)) = theta_ARG
    double z_step = 0.0;    // 1 / sqrt(2 mu_gossip R_max)
    GossipAlgo algo = GossipAlgo::accelerated;

    /// Mixing rate actually applied: mix_rate for accelerated gossip, 0 for naive.
    double rate() const noexcept { return algo == GossipAlgo::accelerated ? mix_rate : 0.0; }

    static GossipParams from_spectral(const SpectralCache& cache, GossipAlgo algo);
};

/// x_v, x_w <- (x_v + x_w) / 2.
void naive_step(GossipNetworkState& state, const Graph& graph, std::size_t v, std::size_t w);

/// Closed-form constant-rate mixing of node v from last_t(v) to `to_t`.
void lazy_mix_node(GossipNetworkState& state, std::size_t v, double to_t, double rate);

/// Jump on an edge whose endpoints are already mixed to t_event.
void accelerated_step(GossipNetworkState& state, const Graph& graph, std::size_t v,
                      std::size_t w, const GossipParams& params, double t_event);

/// Mixes the endpoints to the event time and applies the algorithm's jump.
void apply_event(GossipNetworkState& state, const Graph& graph, const GossipParams& params,
                 const GossipEvent& event);

/// x of every node at time t (>= every last_t), without touching the state.
NodeMatrix synchronized_x(const GossipNetworkState& state, double t, double rate);
NodeMatrix synchronized_z(const GossipNetworkState& state, double t, double rate);
/// Mixes every node to t in place.
void synchronize(GossipNetworkState& state, double t, double rate);

/// E(t) = sum_v |x_t(v) - x_bar|^2 / 2.
double gossip_energy(const GossipNetworkState& state, double t, double rate);

inline constexpr const char* kEnergyMetric = "energy";

struct GossipResult {
    Trace trace;
    GossipNetworkState terminal;
};

GossipResult run_gossip(const Graph& graph, const GossipParams& params, const NodeMatrix& x0,
                        double horizon, EventSource& events,
                        std::span<const double> checkpoints);
GossipResult run_gossip(const Graph& graph, const GossipParams& params, const Vector& x0,
                        double horizon, RunRng& rng, std::span<const double> checkpoints);

/// x0(v) = 0 everywhere except x0(spike) = 1.
Vector spike_initialization(std::size_t node_count, std::size_t spike = 0);

}  // namespace continuized
