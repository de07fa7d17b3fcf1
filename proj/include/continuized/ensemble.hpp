#pragma once

#include "continuized/config.hpp"
#include "continuized/graphs.hpp"
#include "continuized/trace.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace continuized {

ConvexProblem problem_from_spec(const ProblemSpec& spec);
Graph graph_from_spec(const GraphSpec& spec);
/// Schedule for `problem`, with spec overrides. Coordinate kinds sample coordinates
/// uniformly and default L to the smallest admissible value.
ParamSchedule schedule_from_spec(const ScheduleSpec& spec, const ConvexProblem& problem);

/// Linear interpolation of order statistics at h = (n - 1) p.
double quantile_sorted(std::span<const double> sorted, double p);

struct AggregateRow {
    double t;
    std::string metric;
    double mean;
    double q05;
    double q95;
    std::optional<double> bound;
};

/// Ensemble of seeded runs sharing one checkpoint grid.
struct RunSet {
    std::vector<std::string> metrics;
    std::vector<double> times;
    std::vector<Trace> traces;
    std::vector<AggregateRow> rows;  // ordered by checkpoint, then metric
    bool has_bounds = false;

    const AggregateRow& row(std::size_t checkpoint, std::string_view metric) const;
    std::vector<double> mean_series(std::string_view metric) const;
};

/// Per-checkpoint mean and 5%/95% quantiles of every metric, in run-index order.
std::vector<AggregateRow> aggregate(const std::vector<Trace>& traces);

/// Everything a run needs that does not depend on the run index.
class PreparedExperiment {
public:
    explicit PreparedExperiment(const ExperimentSpec& spec);
    ~PreparedExperiment();
    PreparedExperiment(PreparedExperiment&&) noexcept;

    const ExperimentSpec& spec() const;
    const std::vector<double>& checkpoints() const;
    /// Executes run `index` with seed run_seed(spec.seed, index).
    Trace run(std::size_t index) const;
    /// Theoretical reference value for a metric at time t, when one exists.
    std::optional<double> bound(std::string_view metric, double t) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Runs the ensemble with OpenMP across runs. Output is independent of scheduling.
RunSet run_experiment(const ExperimentSpec& spec);
RunSet run_prepared(const PreparedExperiment& prepared);

/// Packs traces (in run order) into a RunSet with aggregates and bounds.
RunSet assemble_runset(const PreparedExperiment& prepared, std::vector<Trace> traces);

}  // namespace continuized
