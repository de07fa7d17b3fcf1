#pragma once

#include "continuized/linalg.hpp"
#include "continuized/problems.hpp"
#include "continuized/rng.hpp"
#include "continuized/schedule.hpp"
#include "continuized/trace.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace continuized {

/// The pair (x_t, z_t) at time t after `event_count` gradient jumps.
struct CoupledState {
    Vector x;
    Vector z;
    double t = 0.0;
    std::uint64_t event_count = 0;

    static CoupledState at(const Vector& x0, const Vector& z0);
};

/// Integrates the mixing ODE dx = eta (z - x) dt, dz = eta' (x - z) dt exactly from
/// state.t to `until`.
CoupledState mix_closed_form(const CoupledState& state, const ParamSchedule& schedule,
                             double until);
void mix_closed_form_inplace(CoupledState& state, const ParamSchedule& schedule, double until);

/// x -= gamma * extra_x_factor * g; z -= gamma' * g; one more event.
CoupledState gradient_jump(const CoupledState& state, double gamma, double gamma_prime,
                           const Vector& g, double extra_x_factor = 1.0);
void gradient_jump_inplace(CoupledState& state, double gamma, double gamma_prime,
                           const Vector& g, double extra_x_factor = 1.0);

/// phi_t for the given coefficients. Multiplicative coefficients use
/// A/2 |x - x_*|^2 + B/2 |z - x_*|^2_{H^+}.
double lyapunov_value(const CoupledState& state, const LyapunovCoeffs& coeffs,
                      const ConvexProblem& problem);

/// What the event loop saw at event k: the pre-jump point y (= x_{T_k-}) and the
/// post-jump pair.
struct EventSnapshot {
    std::uint64_t k;
    double time;
    const Vector& y;
    const Vector& x;
    const Vector& z;
};

struct RunOptions {
    /// Times at which metrics are sampled (mix-forward on a copy, no jump).
    std::vector<double> checkpoints;
    bool record_events = false;
    /// Stop after this many jumps even if the horizon is not reached (0 = no limit).
    std::uint64_t max_events = 0;
    std::function<void(const EventSnapshot&)> on_event;
};

struct ContinuizedResult {
    Trace trace;
    CoupledState terminal;
};

/// Metrics recorded by the continuized loops.
inline constexpr const char* kGapMetric = "gap";
inline constexpr const char* kDistMetric = "dist2";
inline constexpr const char* kLyapunovMetric = "lyapunov";

/// Event loop of the continuized iteration: mix to the next event time, jump with
/// the (stochastic) gradient at the pre-jump x. Vanishing-mixing schedules require
/// x0 == z0. Stops at the last event <= horizon and mixes to the horizon.
ContinuizedResult run_continuized(const ConvexProblem& problem, const NoiseModel& noise,
                                  const ParamSchedule& schedule, const EventClock& clock,
                                  double horizon, RunRng& rng, const Vector& x0,
                                  const Vector& z0, const RunOptions& options = {});

ContinuizedResult run_continuized(const ConvexProblem& problem, const NoiseModel& noise,
                                  const ParamSchedule& schedule, const EventClock& clock,
                                  double horizon, RunRng& rng, const RunOptions& options = {});

/// Continuized accelerated coordinate descent: at each event coordinate i is drawn
/// with probability probs[i]; g = e_i d_i f / p_i, and the x-step carries the extra
/// factor 1/p_i.
ContinuizedResult run_coordinate(const ConvexProblem& problem, const std::vector<double>& probs,
                                 const ParamSchedule& schedule, double horizon, RunRng& rng,
                                 const Vector& x0, const RunOptions& options = {});

/// Smallest admissible L for coordinate sampling: max_i M_ii / p_i^2, M_ii the
/// coordinate-wise smoothness (diagonal quadratics: d_i).
double coordinate_smoothness(const std::vector<double>& diag_smoothness,
                             const std::vector<double>& probs);

}  // namespace continuized
