#include "continuized/ensemble.hpp"

#include "continuized/baselines.hpp"
#include "continuized/continuized.hpp"
#include "continuized/dual.hpp"
#include "continuized/errors.hpp"
#include "continuized/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <string>

namespace continuized {

ConvexProblem problem_from_spec(const ProblemSpec& spec) {
    if (spec.kind == "quadratic") return make_quadratic(std::span(spec.diag), std::span(spec.center));
    if (spec.kind == "least_squares") return make_least_squares(spec.samples);
    if (spec.kind == "appendix_convex") return appendix_convex_problem(spec.dimension);
    if (spec.kind == "appendix_strongly_convex") return appendix_strongly_convex_problem(spec.mu, spec.L);
    throw InvalidArgument("unknown problem kind '" + spec.kind + "'");
}

Graph graph_from_spec(const GraphSpec& spec) {
    if (spec.topology == "line") return build_graph(topology::Line{spec.nodes});
    if (spec.topology == "cycle") return build_graph(topology::Cycle{spec.nodes});
    if (spec.topology == "grid") return build_graph(topology::Grid{spec.rows, spec.cols});
    if (spec.topology == "complete") return build_graph(topology::Complete{spec.nodes});
    if (spec.topology == "edges") {
        return parse_edge_list(spec.edges, spec.nodes > 0 ? std::optional(spec.nodes) : std::nullopt);
    }
    throw InvalidGraph("unknown topology '" + spec.topology + "'");
}

namespace {

bool coordinate_kind(ScheduleKind kind) {
    return kind == ScheduleKind::coordinate_convex || kind == ScheduleKind::coordinate_strongly_convex;
}

bool convex_kind(ScheduleKind kind) {
    return kind == ScheduleKind::convex || kind == ScheduleKind::multiplicative_convex ||
           kind == ScheduleKind::coordinate_convex;
}

std::vector<double> uniform_probs(std::size_t d) { return std::vector<double>(d, 1.0 / static_cast<double>(d)); }

/// Diagonal of the Hessian of a quadratic, read off exact gradients.
std::vector<double> hessian_diagonal(const ConvexProblem& problem) {
    const auto d = static_cast<Eigen::Index>(problem.dimension);
    const Vector g0 = gradient(problem, Vector::Zero(d));
    std::vector<double> diag(problem.dimension);
    for (Eigen::Index i = 0; i < d; ++i) {
        diag[static_cast<std::size_t>(i)] = (gradient(problem, Vector::Unit(d, i)) - g0)[i];
    }
    return diag;
}

}  // namespace

ParamSchedule schedule_from_spec(const ScheduleSpec& spec, const ConvexProblem& problem) {
    const double mu = spec.mu.value_or(problem.strong_convexity);
    switch (spec.kind) {
        case ScheduleKind::convex:
            return ParamSchedule::convex(spec.L.value_or(problem.smoothness));
        case ScheduleKind::strongly_convex:
            return ParamSchedule::strongly_convex(spec.L.value_or(problem.smoothness), mu);
        case ScheduleKind::multiplicative_convex:
        case ScheduleKind::multiplicative_strongly_convex: {
            const auto& ls = problem.least_squares;
            if (!ls && (!spec.r_squared || !spec.kappa_tilde)) {
                throw InvalidArgument("multiplicative schedules need a least-squares problem or explicit r_squared/kappa_tilde");
            }
            const double r2 = spec.r_squared.value_or(ls ? ls->r_squared : 0.0);
            const double kt = spec.kappa_tilde.value_or(ls ? ls->kappa_tilde : 0.0);
            if (spec.kind == ScheduleKind::multiplicative_convex) return ParamSchedule::multiplicative_convex(r2, kt);
            return ParamSchedule::multiplicative_strongly_convex(r2, kt, mu);
        }
        case ScheduleKind::coordinate_convex:
        case ScheduleKind::coordinate_strongly_convex: {
            const double L = spec.L ? *spec.L
                                    : coordinate_smoothness(hessian_diagonal(problem),
                                                            uniform_probs(problem.dimension));
            if (spec.kind == ScheduleKind::coordinate_convex) return ParamSchedule::coordinate_convex(L);
            return ParamSchedule::coordinate_strongly_convex(L, mu);
        }
    }
    throw InvalidArgument("unknown schedule kind");
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

const AggregateRow& RunSet::row(std::size_t checkpoint, std::string_view metric) const {
    const auto it = std::find(metrics.begin(), metrics.end(), metric);
    if (it == metrics.end()) throw InvalidArgument("run set has no metric '" + std::string(metric) + "'");
    return rows.at(checkpoint * metrics.size() + static_cast<std::size_t>(it - metrics.begin()));
}

std::vector<double> RunSet::mean_series(std::string_view metric) const {
    std::vector<double> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back(row(i, metric).mean);
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<Trace>& traces) {
    std::vector<AggregateRow> rows;
    if (traces.empty()) return rows;
    const Trace& first = traces.front();
    for (const auto& tr : traces) {
        if (tr.metrics != first.metrics || tr.checkpoints.size() != first.checkpoints.size()) {
            throw InvalidArgument("traces do not share a checkpoint grid");
        }
    }
    const std::size_t n = traces.size();
    std::vector<double> column(n);
    for (std::size_t c = 0; c < first.checkpoints.size(); ++c) {
        const double t = first.checkpoints[c].t;
        for (std::size_t m = 0; m < first.metrics.size(); ++m) {
            double sum = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                if (traces[r].checkpoints[c].t != t) throw InvalidArgument("traces do not share a checkpoint grid");
                column[r] = traces[r].checkpoints[c].values[m];
                sum += column[r];
            }
            std::sort(column.begin(), column.end());
            rows.push_back({t, first.metrics[m], sum / static_cast<double>(n), quantile_sorted(column, 0.05),
                            quantile_sorted(column, 0.95), std::nullopt});
        }
    }
    return rows;
}

inline constexpr const char* kNesterovMetric = "nesterov_gap";
inline constexpr const char* kGdMetric = "gd_gap";

struct PreparedExperiment::Impl {
    ExperimentSpec spec;
    std::vector<double> checkpoints;

    // optimize
    std::optional<ConvexProblem> problem;
    std::optional<ParamSchedule> schedule;
    Vector start;
    std::vector<double> baseline_nesterov;  // per checkpoint
    std::vector<double> baseline_gd;

    // gossip / decentralized
    std::optional<Graph> graph;
    std::optional<SpectralCache> cache;
    NodeMatrix gossip_x0;
    std::vector<GossipAlgo> algos;
    std::vector<LocalFunction> functions;
    std::optional<DualParams> dual;

    void prepare_optimize();
    void prepare_gossip();
    void prepare_decentralized();
    Trace run_optimize(std::size_t index) const;
    Trace run_gossip_once(std::size_t index) const;
    Trace run_decentralized_once(std::size_t index) const;
    std::optional<double> bound(std::string_view metric, double t) const;
};

void PreparedExperiment::Impl::prepare_optimize() {
    const OptimizeSpec& o = spec.optimize;
    problem = problem_from_spec(o.problem);
    schedule = schedule_from_spec(o.schedule, *problem);
    const auto d = static_cast<Eigen::Index>(problem->dimension);
    if (o.start == "zero") {
        start = Vector::Zero(d);
    } else if (o.start == "optimum") {
        start = problem->optimum;
    } else {
        if (static_cast<Eigen::Index>(o.start_point.size()) != d) {
            throw DimensionMismatch("start point", problem->dimension, o.start_point.size());
        }
        start = Eigen::Map<const Vector>(o.start_point.data(), d);
    }
    if (o.noise.kind == NoiseKind::multiplicative && !problem->least_squares) {
        throw InvalidArgument("multiplicative noise needs a least_squares problem");
    }
    if (coordinate_kind(schedule->kind()) && o.noise.kind != NoiseKind::none) {
        throw InvalidArgument("coordinate schedules do not take a noise model");
    }
    if (o.baselines) {
        const auto iters = static_cast<std::size_t>(std::floor(spec.horizon));
        const NesterovVariant variant = convex_kind(schedule->kind()) || !(problem->strong_convexity > 0.0)
                                            ? NesterovVariant::convex
                                            : NesterovVariant::strongly_convex;
        const Trace nest = run_nesterov(*problem, variant, iters, start);
        const Trace gd = run_gd(*problem, 1.0 / problem->smoothness, iters, start);
        for (const double t : checkpoints) {
            const auto k = static_cast<std::size_t>(std::floor(t));
            baseline_nesterov.push_back(nest.checkpoints.at(k).values[0]);
            baseline_gd.push_back(gd.checkpoints.at(k).values[0]);
        }
    }
}

void PreparedExperiment::Impl::prepare_gossip() {
    const GossipSpec& g = spec.gossip;
    graph = graph_from_spec(g.graph);
    cache = spectral(*graph);
    Vector x0;
    if (g.init.empty()) {
        x0 = spike_initialization(graph->node_count(), g.spike);
    } else {
        if (g.init.size() != graph->node_count()) throw DimensionMismatch("gossip init", graph->node_count(), g.init.size());
        x0 = Eigen::Map<const Vector>(g.init.data(), static_cast<Eigen::Index>(g.init.size()));
    }
    gossip_x0 = x0;
    if (g.algo == "accelerated" || g.algo == "both") algos.push_back(GossipAlgo::accelerated);
    if (g.algo == "naive" || g.algo == "both") algos.push_back(GossipAlgo::naive);
    if (algos.empty()) throw InvalidArgument("unknown gossip algorithm '" + g.algo + "'");
}

void PreparedExperiment::Impl::prepare_decentralized() {
    const DecentralizedSpec& d = spec.decentralized;
    graph = graph_from_spec(d.graph);
    cache = spectral(*graph);
    if (d.nodes.empty()) {
        Stream rng(d.function_seed);
        functions = random_quadratics(graph->node_count(), d.dimension, d.mu, d.L, rng);
    } else {
        if (d.nodes.size() != graph->node_count()) {
            throw DimensionMismatch("local functions", graph->node_count(), d.nodes.size());
        }
        for (const auto& n : d.nodes) {
            functions.push_back(LocalFunction::quadratic(
                n.curvature, Eigen::Map<const Vector>(n.center.data(), static_cast<Eigen::Index>(n.center.size()))));
        }
    }
    for (std::size_t v = 0; v < functions.size(); ++v) {
        if (functions[v].curvature() < d.mu || functions[v].curvature() > d.L) {
            throw InvalidProblem("node " + std::to_string(v) + " curvature lies outside [mu, L]");
        }
    }
    dual = DualParams::compute(*graph, *cache, d.mu, d.L);
}

Trace PreparedExperiment::Impl::run_optimize(std::size_t index) const {
    RunRng rng(run_seed(spec.seed, index));
    RunOptions options;
    options.checkpoints = checkpoints;
    ContinuizedResult res =
        coordinate_kind(schedule->kind())
            ? run_coordinate(*problem, uniform_probs(problem->dimension), *schedule, spec.horizon, rng, start, options)
            : run_continuized(*problem, spec.optimize.noise, *schedule, spec.optimize.clock, spec.horizon, rng,
                              start, start, options);
    Trace trace = std::move(res.trace);
    if (spec.optimize.baselines) {
        trace.metrics.push_back(kNesterovMetric);
        trace.metrics.push_back(kGdMetric);
        for (std::size_t c = 0; c < trace.checkpoints.size(); ++c) {
            trace.checkpoints[c].values.push_back(baseline_nesterov[c]);
            trace.checkpoints[c].values.push_back(baseline_gd[c]);
        }
    }
    return trace;
}

Trace PreparedExperiment::Impl::run_gossip_once(std::size_t index) const {
    RunRng rng(run_seed(spec.seed, index));
    // Every algorithm sees the same activations.
    const std::vector<GossipEvent> events = sample_events(*graph, rng, spec.horizon);
    Trace out;
    for (const GossipAlgo algo : algos) {
        ReplayEvents replay(events);
        const GossipResult res = run_gossip(*graph, GossipParams::from_spectral(*cache, algo), gossip_x0,
                                            spec.horizon, replay, checkpoints);
        if (out.checkpoints.empty()) {
            out.checkpoints = res.trace.checkpoints;
        } else {
            for (std::size_t c = 0; c < out.checkpoints.size(); ++c) {
                out.checkpoints[c].values.push_back(res.trace.checkpoints[c].values[0]);
            }
        }
        if (algos.size() == 1) {
            out.metrics.push_back(kEnergyMetric);
        } else {
            out.metrics.push_back(std::string(kEnergyMetric) +
                                  (algo == GossipAlgo::accelerated ? "_accelerated" : "_naive"));
        }
    }
    return out;
}

Trace PreparedExperiment::Impl::run_decentralized_once(std::size_t index) const {
    RunRng rng(run_seed(spec.seed, index));
    RandomEvents events(*graph, rng);
    return run_decentralized(*graph, functions, *dual, spec.horizon, events, checkpoints).trace;
}

std::optional<double> PreparedExperiment::Impl::bound(std::string_view metric, double t) const {
    if (spec.kind == ExperimentKind::optimize) {
        const ParamSchedule& s = *schedule;
        const ConvexProblem& p = *problem;
        const NoiseModel& noise = spec.optimize.noise;
        const double z0_dist2 = (start - p.optimum).squaredNorm();
        if (s.multiplicative()) {
            if (metric != kDistMetric) return std::nullopt;
            const double h = hessian_pinv_norm2(*p.least_squares, start - p.optimum);
            const double r2k = s.smoothness() * s.kappa_tilde();
            if (s.kind() == ScheduleKind::multiplicative_convex) return 4.0 * r2k * h / (t * t);
            const double mu = s.strong_convexity();
            return (z0_dist2 + mu * h) * std::exp(-t / std::sqrt(r2k / mu));
        }
        const double L = s.smoothness();
        const double mu = s.strong_convexity();
        const double sigma2 = noise.kind == NoiseKind::additive ? noise.sigma2 : 0.0;
        if (metric == kGapMetric) {
            if (convex_kind(s.kind())) return 2.0 * L * z0_dist2 / (t * t) + sigma2 * t / (3.0 * L);
            return (p.gap(start) + 0.5 * mu * z0_dist2) * std::exp(-std::sqrt(mu / L) * t) +
                   sigma2 / std::sqrt(mu * L);
        }
        if (metric == kLyapunovMetric && sigma2 == 0.0) {
            const LyapunovCoeffs c0 = lyapunov_coeffs(s, 0.0);
            return c0.a * p.gap(start) + 0.5 * c0.b * z0_dist2;
        }
        return std::nullopt;
    }
    if (spec.kind == ExperimentKind::gossip) {
        const bool accelerated = metric == std::string(kEnergyMetric) + "_accelerated" ||
                                 (metric == kEnergyMetric && algos.front() == GossipAlgo::accelerated);
        if (!accelerated) return std::nullopt;
        const double e0 = 0.5 * (gossip_x0.rowwise() - gossip_x0.colwise().mean()).squaredNorm();
        return 2.0 * e0 * std::exp(-gossip_rates(*cache).theta_arg * t);
    }
    return std::nullopt;
}

PreparedExperiment::PreparedExperiment(const ExperimentSpec& spec) : impl_(std::make_unique<Impl>()) {
    spec.validate();
    impl_->spec = spec;
    impl_->checkpoints = spec.checkpoints();
    switch (spec.kind) {
        case ExperimentKind::optimize: impl_->prepare_optimize(); break;
        case ExperimentKind::gossip: impl_->prepare_gossip(); break;
        case ExperimentKind::decentralized: impl_->prepare_decentralized(); break;
        case ExperimentKind::graph_info: throw InvalidArgument("graph-info is not an ensemble experiment");
    }
}

PreparedExperiment::~PreparedExperiment() = default;
PreparedExperiment::PreparedExperiment(PreparedExperiment&&) noexcept = default;

const ExperimentSpec& PreparedExperiment::spec() const { return impl_->spec; }
const std::vector<double>& PreparedExperiment::checkpoints() const { return impl_->checkpoints; }

Trace PreparedExperiment::run(std::size_t index) const {
    switch (impl_->spec.kind) {
        case ExperimentKind::optimize: return impl_->run_optimize(index);
        case ExperimentKind::gossip: return impl_->run_gossip_once(index);
        case ExperimentKind::decentralized: return impl_->run_decentralized_once(index);
        case ExperimentKind::graph_info: break;
    }
    throw InvalidArgument("graph-info is not an ensemble experiment");
}

std::optional<double> PreparedExperiment::bound(std::string_view metric, double t) const {
    return impl_->bound(metric, t);
}

RunSet assemble_runset(const PreparedExperiment& prepared, std::vector<Trace> traces) {
    RunSet set;
    set.times = prepared.checkpoints();
    if (!traces.empty()) set.metrics = traces.front().metrics;
    set.rows = aggregate(traces);
    set.traces = std::move(traces);
    set.has_bounds = prepared.spec().bounds;
    if (set.has_bounds) {
        for (auto& row : set.rows) row.bound = prepared.bound(row.metric, row.t);
    }
    return set;
}

RunSet run_prepared(const PreparedExperiment& prepared) {
    const std::size_t runs = prepared.spec().runs;
    std::vector<Trace> traces(runs);
    std::vector<std::string> errors(runs);
    const auto n = static_cast<long long>(runs);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            traces[idx] = prepared.run(idx);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    }
    for (std::size_t i = 0; i < runs; ++i) {
        if (!errors[i].empty()) throw Error("run " + std::to_string(i) + ": " + errors[i]);
    }
    return assemble_runset(prepared, std::move(traces));
}

RunSet run_experiment(const ExperimentSpec& spec) { return run_prepared(PreparedExperiment(spec)); }

}  // namespace continuized
