#pragma once

#include "continuized/linalg.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace continuized {

struct Edge {
    std::size_t v;
    std::size_t w;
};

/// Connected, simple, undirected graph with an activation probability per edge.
class Graph {
public:
    Graph(std::size_t node_count, std::vector<Edge> edges, std::vector<double> probs);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    const std::vector<double>& cumulative() const noexcept { return cumulative_; }
    double prob(std::size_t e) const { return probs_.at(e); }
    double min_prob() const;

    /// Index of edge {v, w}, or nullopt.
    std::optional<std::size_t> find_edge(std::size_t v, std::size_t w) const;
    /// Index of edge {v, w}; throws EdgeNotFound.
    std::size_t edge_index(std::size_t v, std::size_t w) const;

    /// L = sum_e P_e (e_v - e_w)(e_v - e_w)^T.
    Matrix laplacian() const;

    std::string description;

private:
    std::size_t node_count_;
    std::vector<Edge> edges_;
    std::vector<double> probs_;
    std::vector<double> cumulative_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;  // (neighbour, edge)
};

namespace topology {
struct Line { std::size_t nodes; };
struct Cycle { std::size_t nodes; };
struct Grid { std::size_t rows; std::size_t cols; };
struct Complete { std::size_t nodes; };
struct EdgeList {
    std::size_t nodes;
    std::vector<Edge> edges;
};
}  // namespace topology

using Topology = std::variant<topology::Line, topology::Cycle, topology::Grid, topology::Complete,
                              topology::EdgeList>;

/// Edge weights: uniform 1/|E|, or explicit positive intensities (one per edge, in
/// edge order) which are normalised to sum to one.
struct Weights {
    std::vector<double> explicit_weights;  // empty = uniform

    static Weights uniform() { return {}; }
};

Graph build_graph(const Topology& topology, const Weights& weights = Weights::uniform());

/// Parses "v w p" lines (0-based node ids, '#' comments) into an edge list graph.
Graph parse_edge_list(const std::string& text, std::optional<std::size_t> node_count = {});

/// Spectral quantities of the weighted Laplacian.
struct SpectralCache {
    Matrix laplacian;
    Vector eigenvalues;  // ascending
    double mu_gossip = 0.0;
    Matrix pinv_laplacian;
    std::vector<double> r_eff;  // per edge, in edge order
    double r_max = 0.0;
};

SpectralCache spectral(const Graph& graph);

struct GossipRates {
    double theta_rg;
    double theta_arg;
};

/// theta_RG = mu_gossip, theta_ARG = sqrt(mu_gossip / (2 R_max)).
GossipRates gossip_rates(const SpectralCache& cache);

/// (e_v - e_w)^T L^+ (e_v - e_w) for any pair of nodes.
double effective_resistance(const SpectralCache& cache, std::size_t v, std::size_t w);

}  // namespace continuized
