#include "continuized/graphs.hpp"

#include "continuized/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace continuized {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges, std::vector<double> probs)
    : node_count_(node_count), edges_(std::move(edges)), probs_(std::move(probs)) {
    if (node_count_ < 2) throw InvalidGraph("a graph needs at least 2 nodes");
    if (edges_.empty()) throw InvalidGraph("a graph needs at least one edge");
    if (probs_.size() != edges_.size()) {
        throw InvalidGraph("expected " + std::to_string(edges_.size()) + " edge weights, got " +
                           std::to_string(probs_.size()));
    }
    adjacency_.assign(node_count_, {});
    double total = 0.0;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& [v, w] = edges_[e];
        if (v >= node_count_ || w >= node_count_) {
            throw InvalidGraph("edge {" + std::to_string(v) + "," + std::to_string(w) +
                               "} references a node outside [0, " + std::to_string(node_count_) + ")");
        }
        if (v == w) throw InvalidGraph("self-loop at node " + std::to_string(v));
        if (v > w) std::swap(v, w);
        if (find_edge(v, w)) {
            throw InvalidGraph("duplicate edge {" + std::to_string(v) + "," + std::to_string(w) + "}");
        }
        if (!(probs_[e] > 0.0) || !std::isfinite(probs_[e])) {
            throw InvalidGraph("edge weights must be positive and finite");
        }
        adjacency_[v].emplace_back(w, e);
        adjacency_[w].emplace_back(v, e);
        total += probs_[e];
    }
    cumulative_.resize(probs_.size());
    double running = 0.0;
    for (std::size_t e = 0; e < probs_.size(); ++e) {
        probs_[e] /= total;
        running += probs_[e];
        cumulative_[e] = running;
    }
    cumulative_.back() = 1.0;

    std::vector<bool> seen(node_count_, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop();
        for (const auto& [w, e] : adjacency_[v]) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                frontier.push(w);
            }
        }
    }
    if (reached != node_count_) {
        throw InvalidGraph("graph is disconnected (" + std::to_string(reached) + " of " +
                           std::to_string(node_count_) + " nodes reachable from node 0)");
    }
}

double Graph::min_prob() const { return *std::min_element(probs_.begin(), probs_.end()); }

std::optional<std::size_t> Graph::find_edge(std::size_t v, std::size_t w) const {
    if (v >= adjacency_.size()) return std::nullopt;
    for (const auto& [u, e] : adjacency_[v]) {
        if (u == w) return e;
    }
    return std::nullopt;
}

std::size_t Graph::edge_index(std::size_t v, std::size_t w) const {
    if (auto e = find_edge(v, w)) return *e;
    throw EdgeNotFound(v, w);
}

Matrix Graph::laplacian() const {
    const auto n = static_cast<Eigen::Index>(node_count_);
    Matrix L = Matrix::Zero(n, n);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto v = static_cast<Eigen::Index>(edges_[e].v);
        const auto w = static_cast<Eigen::Index>(edges_[e].w);
        const double p = probs_[e];
        L(v, v) += p;
        L(w, w) += p;
        L(v, w) -= p;
        L(w, v) -= p;
    }
    return L;
}

namespace {

struct Shape {
    std::size_t nodes;
    std::vector<Edge> edges;
    std::string description;
};

Shape shape_of(const topology::Line& t) {
    if (t.nodes < 2) throw InvalidGraph("line needs at least 2 nodes");
    Shape s{t.nodes, {}, "line(" + std::to_string(t.nodes) + ")"};
    for (std::size_t v = 0; v + 1 < t.nodes; ++v) s.edges.push_back({v, v + 1});
    return s;
}

Shape shape_of(const topology::Cycle& t) {
    if (t.nodes < 3) throw InvalidGraph("cycle needs at least 3 nodes");
    Shape s{t.nodes, {}, "cycle(" + std::to_string(t.nodes) + ")"};
    for (std::size_t v = 0; v < t.nodes; ++v) s.edges.push_back({v, (v + 1) % t.nodes});
    return s;
}

Shape shape_of(const topology::Grid& t) {
    if (t.rows == 0 || t.cols == 0 || t.rows * t.cols < 2) {
        throw InvalidGraph("grid needs at least 2 nodes");
    }
    Shape s{t.rows * t.cols, {},
            "grid(" + std::to_string(t.rows) + "x" + std::to_string(t.cols) + ")"};
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t c = 0; c + 1 < t.cols; ++c) s.edges.push_back({r * t.cols + c, r * t.cols + c + 1});
    }
    for (std::size_t r = 0; r + 1 < t.rows; ++r) {
        for (std::size_t c = 0; c < t.cols; ++c) s.edges.push_back({r * t.cols + c, (r + 1) * t.cols + c});
    }
    return s;
}

Shape shape_of(const topology::Complete& t) {
    if (t.nodes < 2) throw InvalidGraph("complete graph needs at least 2 nodes");
    Shape s{t.nodes, {}, "complete(" + std::to_string(t.nodes) + ")"};
    for (std::size_t v = 0; v < t.nodes; ++v) {
        for (std::size_t w = v + 1; w < t.nodes; ++w) s.edges.push_back({v, w});
    }
    return s;
}

Shape shape_of(const topology::EdgeList& t) {
    return {t.nodes, t.edges, "edges(" + std::to_string(t.nodes) + " nodes)"};
}

}  // namespace

Graph build_graph(const Topology& topology, const Weights& weights) {
    Shape s = std::visit([](const auto& t) { return shape_of(t); }, topology);
    std::vector<double> probs;
    if (weights.explicit_weights.empty()) {
        probs.assign(s.edges.size(), 1.0);
    } else {
        probs = weights.explicit_weights;
    }
    Graph g(s.nodes, std::move(s.edges), std::move(probs));
    g.description = std::move(s.description);
    return g;
}

Graph parse_edge_list(const std::string& text, std::optional<std::size_t> node_count) {
    std::vector<Edge> edges;
    std::vector<double> probs;
    std::size_t max_id = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        long long v = 0;
        long long w = 0;
        double p = 0.0;
        if (!(fields >> v)) continue;  // blank line
        std::string rest;
        if (!(fields >> w >> p) || (fields >> rest)) {
            throw InvalidGraph("edge list line " + std::to_string(lineno) + ": expected 'v w p'");
        }
        if (v < 0 || w < 0) {
            throw InvalidGraph("edge list line " + std::to_string(lineno) + ": negative node id");
        }
        edges.push_back({static_cast<std::size_t>(v), static_cast<std::size_t>(w)});
        probs.push_back(p);
        max_id = std::max({max_id, static_cast<std::size_t>(v), static_cast<std::size_t>(w)});
    }
    if (edges.empty()) throw InvalidGraph("edge list is empty");
    const std::size_t n = node_count.value_or(max_id + 1);
    return build_graph(topology::EdgeList{n, std::move(edges)}, Weights{std::move(probs)});
}

SpectralCache spectral(const Graph& graph) {
    SpectralCache cache;
    cache.laplacian = graph.laplacian();
    const SymmetricEigen eig = symmetric_eigen(cache.laplacian);
    cache.eigenvalues = eig.values;
    cache.mu_gossip = eig.values[1];
    if (!(cache.mu_gossip > rank_tolerance(eig))) {
        throw InvalidGraph("Laplacian has a degenerate spectral gap");
    }
    cache.pinv_laplacian = psd_pseudo_inverse(eig);
    cache.r_eff.reserve(graph.edge_count());
    for (const auto& e : graph.edges()) {
        const double r = effective_resistance(cache, e.v, e.w);
        cache.r_eff.push_back(r);
        cache.r_max = std::max(cache.r_max, r);
    }
    return cache;
}

GossipRates gossip_rates(const SpectralCache& cache) {
    return {cache.mu_gossip, std::sqrt(cache.mu_gossip / (2.0 * cache.r_max))};
}

double effective_resistance(const SpectralCache& cache, std::size_t v, std::size_t w) {
    const auto n = static_cast<std::size_t>(cache.pinv_laplacian.rows());
    if (v >= n || w >= n) throw InvalidArgument("effective_resistance: node out of range");
    const auto a = static_cast<Eigen::Index>(v);
    const auto b = static_cast<Eigen::Index>(w);
    const Matrix& P = cache.pinv_laplacian;
    return P(a, a) + P(b, b) - 2.0 * P(a, b);
}

}  // namespace continuized
