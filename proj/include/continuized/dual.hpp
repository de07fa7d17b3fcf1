#pragma once

#include "continuized/gossip.hpp"
#include "continuized/graphs.hpp"
#include "continuized/linalg.hpp"
#include "continuized/rng.hpp"
#include "continuized/trace.hpp"

#include <functional>
#include <span>
#include <vector>

namespace continuized {

/// Local objective f_v held by one node. Quadratics (mu_v/2)|x - c_v|^2 carry a
/// closed-form conjugate gradient; custom functions may register one.
class LocalFunction {
public:
    using Map = std::function<Vector(const Vector&)>;

    static LocalFunction quadratic(double curvature, Vector center);
    /// A strongly convex f_v given by its gradient and, optionally, grad f_v^*.
    static LocalFunction custom(std::size_t dimension, double mu, double L, Map gradient,
                                Map conjugate_gradient = {});

    bool is_quadratic() const noexcept { return quadratic_; }
    std::size_t dimension() const noexcept { return dimension_; }
    double curvature() const noexcept { return mu_; }
    double smoothness() const noexcept { return L_; }
    const Vector& center() const noexcept { return center_; }

    Vector gradient(const Vector& x) const;
    /// grad f_v^*(y); throws InvalidArgument when no conjugate oracle is available.
    Vector conjugate_gradient(const Vector& y) const;

private:
    LocalFunction() = default;

    bool quadratic_ = false;
    std::size_t dimension_ = 0;
    double mu_ = 0.0;
    double L_ = 0.0;
    Vector center_;
    Map gradient_;
    Map conjugate_;
};

Vector conjugate_grad(const LocalFunction& fv, const Vector& y);

/// R_e = e_e^T A^+ A e_e = P_e r_eff(e), in edge order.
std::vector<double> incidence_r(const Graph& graph, const SpectralCache& cache);

struct DualParams {
    double l_dual = 0.0;           // max_e M_ee R_e / P_e^2 with M_ee = 2 P_e / mu
    double theta_prime_arg = 0.0;  // sqrt(mu_gossip / (2 max_e R_e / P_e))
    double kappa = 0.0;            // L / mu
    double eta = 0.0;              // theta'_ARG / sqrt(kappa)
    double gamma = 0.0;            // 1 / L_dual
    double gamma_prime = 0.0;      // sqrt(L / (mu_gossip L_dual))
    std::vector<double> r;         // R_e per edge

    static DualParams compute(const Graph& graph, const SpectralCache& cache, double mu, double L);
};

/// y_t = A lambda^(y), z_t = A lambda^(z): one row per node.
struct DualState {
    NodeMatrix y;
    NodeMatrix z;
    std::vector<double> last_t;
    double t = 0.0;
    std::uint64_t event_count = 0;

    static DualState zeros(std::size_t nodes, std::size_t dimension);
};

/// Jump on edge {v, w} (endpoints already mixed to t_event):
///   g = P_e [grad f_v^*(y_v) - grad f_w^*(y_w)],
///   y_v -= gamma R_e / P_e^2 g, y_w += ..., z_v -= gamma' / P_e g, z_w += ...
void dual_update(DualState& state, const Graph& graph, std::size_t v, std::size_t w,
                 const DualParams& params, const LocalFunction& fv, const LocalFunction& fw,
                 double t_event);

/// Mixes the endpoints to the event time (rate eta) and applies dual_update.
void apply_dual_event(DualState& state, const Graph& graph, const DualParams& params,
                      std::span<const LocalFunction> functions, const GossipEvent& event);

void lazy_mix_dual_node(DualState& state, std::size_t v, double to_t, double rate);

/// x_v = grad f_v^*(z_v), with z synchronised to time t on the fly.
NodeMatrix primal_recover(const DualState& state, std::span<const LocalFunction> functions,
                          double t, double rate);
NodeMatrix primal_recover(const DualState& state, std::span<const LocalFunction> functions);

/// Minimiser of sum_v f_v for quadratics: (sum mu_v)^-1 sum mu_v c_v.
Vector quadratic_consensus_optimum(std::span<const LocalFunction> functions);

/// D(t) = sum_v |grad f_v^*(z_v) - x_*|^2 / 2.
double dual_distance(const DualState& state, std::span<const LocalFunction> functions,
                     const Vector& optimum, double t, double rate);

inline constexpr const char* kDualDistMetric = "dist";

struct DecentralizedResult {
    Trace trace;
    DualState terminal;
    Vector optimum;
};

DecentralizedResult run_decentralized(const Graph& graph, std::span<const LocalFunction> functions,
                                      const DualParams& params, double horizon,
                                      EventSource& events, std::span<const double> checkpoints);
DecentralizedResult run_decentralized(const Graph& graph, std::span<const LocalFunction> functions,
                                      double mu, double L, double horizon, RunRng& rng,
                                      std::span<const double> checkpoints);

/// Quadratics with curvatures uniform in [mu, L] and standard normal centres.
std::vector<LocalFunction> random_quadratics(std::size_t nodes, std::size_t dimension, double mu,
                                             double L, Stream& rng);

}  // namespace continuized
