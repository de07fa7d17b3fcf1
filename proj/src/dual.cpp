#include "continuized/dual.hpp"

#include "continuized/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace continuized {

LocalFunction LocalFunction::quadratic(double curvature, Vector center) {
    if (!(curvature > 0.0) || !std::isfinite(curvature)) {
        throw InvalidProblem("local quadratic curvature must be positive");
    }
    if (center.size() == 0) throw InvalidProblem("local quadratic centre is empty");
    LocalFunction f;
    f.quadratic_ = true;
    f.dimension_ = static_cast<std::size_t>(center.size());
    f.mu_ = curvature;
    f.L_ = curvature;
    f.center_ = std::move(center);
    return f;
}

LocalFunction LocalFunction::custom(std::size_t dimension, double mu, double L, Map gradient,
                                    Map conjugate_gradient) {
    if (dimension == 0) throw InvalidProblem("local function dimension must be positive");
    if (!(mu > 0.0) || !(L >= mu)) throw InvalidProblem("local function needs 0 < mu <= L");
    if (!gradient) throw InvalidProblem("local function needs a gradient oracle");
    LocalFunction f;
    f.dimension_ = dimension;
    f.mu_ = mu;
    f.L_ = L;
    f.gradient_ = std::move(gradient);
    f.conjugate_ = std::move(conjugate_gradient);
    return f;
}

Vector LocalFunction::gradient(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dimension_) {
        throw DimensionMismatch("local gradient", dimension_, static_cast<std::size_t>(x.size()));
    }
    if (quadratic_) return mu_ * (x - center_);
    return gradient_(x);
}

Vector LocalFunction::conjugate_gradient(const Vector& y) const {
    if (static_cast<std::size_t>(y.size()) != dimension_) {
        throw DimensionMismatch("conjugate gradient", dimension_, static_cast<std::size_t>(y.size()));
    }
    if (quadratic_) return center_ + y / mu_;
    if (!conjugate_) throw InvalidArgument("local function has no conjugate-gradient oracle");
    return conjugate_(y);
}

Vector conjugate_grad(const LocalFunction& fv, const Vector& y) { return fv.conjugate_gradient(y); }

std::vector<double> incidence_r(const Graph& graph, const SpectralCache& cache) {
    if (cache.r_eff.size() != graph.edge_count()) {
        throw InvalidArgument("spectral cache does not belong to this graph");
    }
    std::vector<double> r(graph.edge_count());
    for (std::size_t e = 0; e < r.size(); ++e) r[e] = graph.prob(e) * cache.r_eff[e];
    return r;
}

DualParams DualParams::compute(const Graph& graph, const SpectralCache& cache, double mu, double L) {
    if (!(mu > 0.0) || !(L >= mu) || !std::isfinite(L)) {
        throw InvalidArgument("decentralized optimisation needs 0 < mu <= L");
    }
    DualParams p;
    p.r = incidence_r(graph, cache);
    double max_ratio = 0.0;  // max_e R_e / P_e
    for (std::size_t e = 0; e < p.r.size(); ++e) max_ratio = std::max(max_ratio, p.r[e] / graph.prob(e));
    // |A e_e|^2 = 2 P_e, so the dual is (2 P_e / mu)-smooth along e_e.
    p.l_dual = 2.0 * max_ratio / mu;
    p.theta_prime_arg = std::sqrt(cache.mu_gossip / (2.0 * max_ratio));
    p.kappa = L / mu;
    p.eta = p.theta_prime_arg / std::sqrt(p.kappa);
    p.gamma = 1.0 / p.l_dual;
    p.gamma_prime = std::sqrt(L / (cache.mu_gossip * p.l_dual));
    for (std::size_t e = 0; e < p.r.size(); ++e) {
        const double pe = graph.prob(e);
        const double needed = (2.0 * pe / mu) * p.r[e] / (pe * pe);
        if (p.l_dual < needed * (1.0 - 1e-12)) {
            throw InvalidArgument("dual smoothness constant is below an edge requirement");
        }
    }
    return p;
}

DualState DualState::zeros(std::size_t nodes, std::size_t dimension) {
    if (nodes < 2 || dimension < 1) throw InvalidArgument("dual state needs >= 2 nodes and dimension >= 1");
    DualState s;
    const auto n = static_cast<Eigen::Index>(nodes);
    const auto d = static_cast<Eigen::Index>(dimension);
    s.y = NodeMatrix::Zero(n, d);
    s.z = NodeMatrix::Zero(n, d);
    s.last_t.assign(nodes, 0.0);
    return s;
}

void dual_update(DualState& state, const Graph& graph, std::size_t v, std::size_t w,
                 const DualParams& params, const LocalFunction& fv, const LocalFunction& fw,
                 double t_event) {
    const std::size_t e = graph.edge_index(v, w);
    if (state.last_t.at(v) != t_event || state.last_t.at(w) != t_event) {
        throw InvalidArgument("dual_update: endpoints must be mixed to the event time first");
    }
    const auto a = static_cast<Eigen::Index>(v);
    const auto b = static_cast<Eigen::Index>(w);
    const double pe = graph.prob(e);
    const Vector yv = state.y.row(a).transpose();
    const Vector yw = state.y.row(b).transpose();
    const Vector g = pe * (fv.conjugate_gradient(yv) - fw.conjugate_gradient(yw));
    const double y_scale = params.gamma * params.r.at(e) / (pe * pe);
    const double z_scale = params.gamma_prime / pe;
    state.y.row(a) -= y_scale * g.transpose();
    state.y.row(b) += y_scale * g.transpose();
    state.z.row(a) -= z_scale * g.transpose();
    state.z.row(b) += z_scale * g.transpose();
}

void lazy_mix_dual_node(DualState& state, std::size_t v, double to_t, double rate) {
    const double from = state.last_t.at(v);
    if (to_t < from) {
        throw InvalidArgument("lazy_mix_dual_node: node " + std::to_string(v) + " is already at t = " +
                              std::to_string(from));
    }
    if (to_t == from) return;
    const auto a = static_cast<Eigen::Index>(v);
    const double decay = std::exp(-2.0 * rate * (to_t - from));
    const Eigen::RowVectorXd mid = 0.5 * (state.y.row(a) + state.z.row(a));
    state.y.row(a) = mid + decay * (state.y.row(a) - mid);
    state.z.row(a) = mid + decay * (state.z.row(a) - mid);
    state.last_t[v] = to_t;
}

void apply_dual_event(DualState& state, const Graph& graph, const DualParams& params,
                      std::span<const LocalFunction> functions, const GossipEvent& event) {
    const Edge& e = graph.edges().at(event.edge);
    lazy_mix_dual_node(state, e.v, event.time, params.eta);
    lazy_mix_dual_node(state, e.w, event.time, params.eta);
    dual_update(state, graph, e.v, e.w, params, functions[e.v], functions[e.w], event.time);
    state.t = event.time;
    ++state.event_count;
}

NodeMatrix primal_recover(const DualState& state, std::span<const LocalFunction> functions,
                          double t, double rate) {
    if (functions.size() != static_cast<std::size_t>(state.z.rows())) {
        throw DimensionMismatch("local functions", static_cast<std::size_t>(state.z.rows()),
                                functions.size());
    }
    NodeMatrix out(state.z.rows(), state.z.cols());
    for (Eigen::Index v = 0; v < state.z.rows(); ++v) {
        const auto vi = static_cast<std::size_t>(v);
        const double from = state.last_t[vi];
        if (t < from) throw InvalidArgument("cannot recover at a time before a node's last update");
        const double decay = std::exp(-2.0 * rate * (t - from));
        const Eigen::RowVectorXd mid = 0.5 * (state.y.row(v) + state.z.row(v));
        const Vector zv = (mid + decay * (state.z.row(v) - mid)).transpose();
        out.row(v) = functions[vi].conjugate_gradient(zv).transpose();
    }
    return out;
}

NodeMatrix primal_recover(const DualState& state, std::span<const LocalFunction> functions) {
    return primal_recover(state, functions, state.t, 0.0);
}

Vector quadratic_consensus_optimum(std::span<const LocalFunction> functions) {
    if (functions.empty()) throw InvalidArgument("no local functions");
    const auto d = static_cast<Eigen::Index>(functions.front().dimension());
    Vector acc = Vector::Zero(d);
    double total = 0.0;
    for (const auto& f : functions) {
        if (!f.is_quadratic()) throw InvalidArgument("closed-form optimum needs quadratic local functions");
        if (f.center().size() != d) {
            throw DimensionMismatch("local function", static_cast<std::size_t>(d), f.dimension());
        }
        acc += f.curvature() * f.center();
        total += f.curvature();
    }
    return acc / total;
}

double dual_distance(const DualState& state, std::span<const LocalFunction> functions,
                     const Vector& optimum, double t, double rate) {
    const NodeMatrix x = primal_recover(state, functions, t, rate);
    return 0.5 * (x.rowwise() - optimum.transpose()).squaredNorm();
}

DecentralizedResult run_decentralized(const Graph& graph, std::span<const LocalFunction> functions,
                                      const DualParams& params, double horizon,
                                      EventSource& events, std::span<const double> checkpoints) {
    if (functions.size() != graph.node_count()) {
        throw DimensionMismatch("local functions", graph.node_count(), functions.size());
    }
    if (params.r.size() != graph.edge_count()) throw InvalidArgument("dual parameters do not match the graph");
    if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (!(checkpoints[i] >= 0.0) || checkpoints[i] > horizon ||
            (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))) {
            throw InvalidArgument("checkpoints must be increasing and within [0, horizon]");
        }
    }
    const std::size_t d = functions.front().dimension();
    for (const auto& f : functions) {
        if (f.dimension() != d) throw DimensionMismatch("local function", d, f.dimension());
    }

    DecentralizedResult result;
    result.optimum = quadratic_consensus_optimum(functions);
    result.trace.metrics = {kDualDistMetric};
    result.trace.checkpoints.reserve(checkpoints.size());
    DualState state = DualState::zeros(graph.node_count(), d);

    std::size_t next_cp = 0;
    auto record = [&](double t) {
        result.trace.checkpoints.push_back(
            {t, state.event_count, {dual_distance(state, functions, result.optimum, t, params.eta)}});
    };
    for (;;) {
        const GossipEvent e = events.next(state.t);
        while (next_cp < checkpoints.size() && checkpoints[next_cp] < e.time) record(checkpoints[next_cp++]);
        if (e.time > horizon) break;
        apply_dual_event(state, graph, params, functions, e);
    }
    while (next_cp < checkpoints.size()) record(checkpoints[next_cp++]);
    for (std::size_t v = 0; v < graph.node_count(); ++v) lazy_mix_dual_node(state, v, horizon, params.eta);
    state.t = horizon;
    result.terminal = std::move(state);
    return result;
}

DecentralizedResult run_decentralized(const Graph& graph, std::span<const LocalFunction> functions,
                                      double mu, double L, double horizon, RunRng& rng,
                                      std::span<const double> checkpoints) {
    for (std::size_t v = 0; v < functions.size(); ++v) {
        const auto& f = functions[v];
        if (f.curvature() < mu * (1.0 - 1e-12) || f.smoothness() > L * (1.0 + 1e-12)) {
            throw InvalidProblem("local function " + std::to_string(v) + " violates mu <= mu_v <= L_v <= L");
        }
    }
    const SpectralCache cache = spectral(graph);
    const DualParams params = DualParams::compute(graph, cache, mu, L);
    RandomEvents events(graph, rng);
    return run_decentralized(graph, functions, params, horizon, events, checkpoints);
}

std::vector<LocalFunction> random_quadratics(std::size_t nodes, std::size_t dimension, double mu,
                                             double L, Stream& rng) {
    if (!(mu > 0.0) || !(L >= mu)) throw InvalidArgument("random_quadratics needs 0 < mu <= L");
    std::vector<LocalFunction> out;
    out.reserve(nodes);
    for (std::size_t v = 0; v < nodes; ++v) {
        const double curvature = mu + (L - mu) * rng.uniform();
        Vector center(static_cast<Eigen::Index>(dimension));
        for (Eigen::Index i = 0; i < center.size(); ++i) center[i] = rng.normal();
        out.push_back(LocalFunction::quadratic(curvature, std::move(center)));
    }
    return out;
}

}  // namespace continuized
