#pragma once

// Serial reference implementations kept for testing and benchmarking the
// optimised paths against.

#include "continuized/dual.hpp"
#include "continuized/ensemble.hpp"
#include "continuized/gossip.hpp"

namespace continuized::reference {

/// Ensemble runner without OpenMP, one run after the other.
RunSet run_experiment_serial(const ExperimentSpec& spec);
RunSet run_prepared_serial(const PreparedExperiment& prepared);

/// Accelerated/naive gossip that mixes every node at every event.
GossipResult run_gossip_eager(const Graph& graph, const GossipParams& params,
                              const NodeMatrix& x0, double horizon,
                              std::span<const GossipEvent> events,
                              std::span<const double> checkpoints);

/// Dual decentralized iteration that mixes every node at every event.
DecentralizedResult run_decentralized_eager(const Graph& graph,
                                            std::span<const LocalFunction> functions,
                                            const DualParams& params, double horizon,
                                            std::span<const GossipEvent> events,
                                            std::span<const double> checkpoints);

}  // namespace continuized::reference
