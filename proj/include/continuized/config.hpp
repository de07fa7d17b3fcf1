#pragma once

#include "continuized/errors.hpp"
#include "continuized/problems.hpp"
#include "continuized/schedule.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace continuized {

/// Validation failure carrying every violation found, one per entry.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

enum class ExperimentKind { optimize, gossip, decentralized, graph_info };

std::string_view to_string(ExperimentKind kind) noexcept;

struct ProblemSpec {
    /// quadratic | least_squares | appendix_convex | appendix_strongly_convex
    std::string kind = "quadratic";
    std::vector<double> diag;
    std::vector<double> center;
    std::vector<Sample> samples;
    std::size_t dimension = 100;  // appendix_convex
    double mu = 1e-2;             // appendix_strongly_convex
    double L = 1.0;
};

struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::strongly_convex;
    // Overrides; default to the problem's constants.
    std::optional<double> L;
    std::optional<double> mu;
    std::optional<double> r_squared;
    std::optional<double> kappa_tilde;
};

struct OptimizeSpec {
    ProblemSpec problem;
    NoiseModel noise;
    ScheduleSpec schedule;
    EventClock clock;
    /// zero | optimum | explicit
    std::string start = "zero";
    std::vector<double> start_point;
    /// Also record deterministic Nesterov and gradient descent curves.
    bool baselines = false;
};

struct GraphSpec {
    /// line | cycle | grid | complete | edges
    std::string topology = "line";
    std::size_t nodes = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string edges;  // "v w p" lines for topology = edges
};

struct GossipSpec {
    GraphSpec graph;
    /// accelerated | naive | both
    std::string algo = "both";
    std::size_t spike = 0;
    std::vector<double> init;  // explicit x0; empty = spike
};

struct LocalSpec {
    double curvature;
    std::vector<double> center;
};

struct DecentralizedSpec {
    GraphSpec graph;
    double mu = 0.1;
    double L = 1.0;
    std::size_t dimension = 1;
    std::vector<LocalSpec> nodes;  // empty = random quadratics from `function_seed`
    std::uint64_t function_seed = 7;
};

enum class Spacing { log, linear };

struct ExperimentSpec {
    std::string name;
    ExperimentKind kind = ExperimentKind::optimize;
    OptimizeSpec optimize;
    GossipSpec gossip;
    DecentralizedSpec decentralized;
    double horizon = 100.0;
    std::size_t runs = 1000;
    std::uint64_t seed = 0;
    std::size_t checkpoint_count = 50;
    Spacing spacing = Spacing::log;
    std::vector<double> checkpoint_list;  // explicit grid; overrides count/spacing
    std::string output_path;
    bool bounds = true;

    /// Explicit list, or `checkpoint_count` times in [1, horizon] (log or linear).
    std::vector<double> checkpoints() const;
    std::vector<std::string> violations() const;
    /// Throws ConfigError listing every violation.
    void validate() const;
};

ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec parse_config(const std::filesystem::path& path);

}  // namespace continuized
