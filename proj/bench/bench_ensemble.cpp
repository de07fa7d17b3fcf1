#include "continuized/ensemble.hpp"
#include "continuized/gossip.hpp"
#include "continuized/presets.hpp"
#include "continuized/reference.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace continuized;

ExperimentSpec small(const char* name, std::size_t runs) {
    ExperimentSpec s = preset(name);
    s.runs = runs;
    return s;
}

void BM_EnsembleOpenMP(benchmark::State& state) {
    const PreparedExperiment prepared(small("appendix-a1-convex", static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(run_prepared(prepared));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnsembleOpenMP)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EnsembleSerial(benchmark::State& state) {
    const PreparedExperiment prepared(small("appendix-a1-convex", static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(reference::run_prepared_serial(prepared));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EnsembleSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GossipEnsembleOpenMP(benchmark::State& state) {
    const PreparedExperiment prepared(small("appendix-a2-grid225", 16));
    for (auto _ : state) benchmark::DoNotOptimize(run_prepared(prepared));
}
BENCHMARK(BM_GossipEnsembleOpenMP)->Unit(benchmark::kMillisecond);

void BM_GossipEnsembleSerial(benchmark::State& state) {
    const PreparedExperiment prepared(small("appendix-a2-grid225", 16));
    for (auto _ : state) benchmark::DoNotOptimize(reference::run_prepared_serial(prepared));
}
BENCHMARK(BM_GossipEnsembleSerial)->Unit(benchmark::kMillisecond);

// Lazy per-node mixing against mixing every node at every event.
void gossip_single(benchmark::State& state, bool eager) {
    const Graph g = build_graph(topology::Grid{15, 15});
    const GossipParams params = GossipParams::from_spectral(spectral(g), GossipAlgo::accelerated);
    RunRng rng(1);
    const double horizon = 2000.0;
    const auto events = sample_events(g, rng, horizon);
    const NodeMatrix x0 = spike_initialization(g.node_count());
    const std::vector<double> cps{horizon};
    for (auto _ : state) {
        if (eager) {
            benchmark::DoNotOptimize(reference::run_gossip_eager(g, params, x0, horizon, events, cps));
        } else {
            ReplayEvents replay(events);
            benchmark::DoNotOptimize(run_gossip(g, params, x0, horizon, replay, cps));
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
void BM_GossipLazy(benchmark::State& state) { gossip_single(state, false); }
void BM_GossipEager(benchmark::State& state) { gossip_single(state, true); }
BENCHMARK(BM_GossipLazy)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GossipEager)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
