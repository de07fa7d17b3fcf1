#include "continuized/continuized.hpp"

#include "continuized/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace continuized {

CoupledState CoupledState::at(const Vector& x0, const Vector& z0) {
    if (x0.size() != z0.size()) {
        throw DimensionMismatch("coupled state", static_cast<std::size_t>(x0.size()),
                                static_cast<std::size_t>(z0.size()));
    }
    return {x0, z0, 0.0, 0};
}

void mix_closed_form_inplace(CoupledState& state, const ParamSchedule& schedule, double until) {
    if (until < state.t) {
        throw InvalidArgument("mix_closed_form: cannot mix backwards from t = " +
                              std::to_string(state.t) + " to " + std::to_string(until));
    }
    if (until == state.t) return;
    if (schedule.vanishing_mixing()) {
        // x_t = z + (t0/t)^2 (x_t0 - z), z constant. At t0 = 0 the limit is x = z.
        const double ratio = state.t / until;
        state.x = state.z + (ratio * ratio) * (state.x - state.z);
    } else {
        // Midpoint preserved, difference decays like exp(-2 c dt).
        const double decay = std::exp(-2.0 * schedule.mixing_rate() * (until - state.t));
        const Vector mid = 0.5 * (state.x + state.z);
        state.x = mid + decay * (state.x - mid);
        state.z = mid + decay * (state.z - mid);
    }
    state.t = until;
}

CoupledState mix_closed_form(const CoupledState& state, const ParamSchedule& schedule, double until) {
    CoupledState out = state;
    mix_closed_form_inplace(out, schedule, until);
    return out;
}

void gradient_jump_inplace(CoupledState& state, double gamma, double gamma_prime, const Vector& g,
                           double extra_x_factor) {
    if (g.size() != state.x.size()) {
        throw DimensionMismatch("gradient_jump", static_cast<std::size_t>(state.x.size()),
                                static_cast<std::size_t>(g.size()));
    }
    state.x.noalias() -= (gamma * extra_x_factor) * g;
    state.z.noalias() -= gamma_prime * g;
    ++state.event_count;
}

CoupledState gradient_jump(const CoupledState& state, double gamma, double gamma_prime,
                           const Vector& g, double extra_x_factor) {
    CoupledState out = state;
    gradient_jump_inplace(out, gamma, gamma_prime, g, extra_x_factor);
    return out;
}

double lyapunov_value(const CoupledState& state, const LyapunovCoeffs& coeffs,
                      const ConvexProblem& problem) {
    const Vector dz = state.z - problem.optimum;
    if (coeffs.multiplicative) {
        if (!problem.least_squares) {
            throw InvalidArgument("multiplicative Lyapunov value needs a least-squares problem");
        }
        return 0.5 * coeffs.a * (state.x - problem.optimum).squaredNorm() +
               0.5 * coeffs.b * hessian_pinv_norm2(*problem.least_squares, dz);
    }
    return coeffs.a * problem.gap(state.x) + 0.5 * coeffs.b * dz.squaredNorm();
}

namespace {

std::vector<double> metrics_at(const CoupledState& s, const ParamSchedule& schedule,
                               const ConvexProblem& problem) {
    return {problem.gap(s.x), (s.x - problem.optimum).squaredNorm(),
            lyapunov_value(s, lyapunov_coeffs(schedule, s.t), problem)};
}

void check_checkpoints(const std::vector<double>& cps, double horizon) {
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (!(cps[i] >= 0.0) || (i > 0 && !(cps[i] > cps[i - 1]))) {
            throw InvalidArgument("checkpoints must be non-negative and strictly increasing");
        }
        if (cps[i] > horizon) {
            throw InvalidArgument("checkpoint " + std::to_string(cps[i]) + " is beyond the horizon " +
                                  std::to_string(horizon));
        }
    }
}

/// Shared event loop. `jump(state, t_event, y)` applies the jump given the pre-jump x.
template <class Jump>
ContinuizedResult event_loop(const ConvexProblem& problem, const ParamSchedule& schedule,
                             const EventClock& clock, double horizon, RunRng& rng,
                             const Vector& x0, const Vector& z0, const RunOptions& options,
                             Jump&& jump) {
    if (static_cast<std::size_t>(x0.size()) != problem.dimension) {
        throw DimensionMismatch("initial x", problem.dimension, static_cast<std::size_t>(x0.size()));
    }
    if (static_cast<std::size_t>(z0.size()) != problem.dimension) {
        throw DimensionMismatch("initial z", problem.dimension, static_cast<std::size_t>(z0.size()));
    }
    if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
    if (std::isinf(horizon) && options.max_events == 0) {
        throw InvalidArgument("an infinite horizon needs max_events");
    }
    if (schedule.vanishing_mixing() && x0 != z0) {
        throw InvalidArgument("schedule " + std::string(to_string(schedule.kind())) +
                              " requires x0 == z0 (the mixing flow is singular at t = 0)");
    }
    check_checkpoints(options.checkpoints, horizon);

    ContinuizedResult result;
    result.trace.metrics = {kGapMetric, kDistMetric, kLyapunovMetric};
    result.trace.checkpoints.reserve(options.checkpoints.size());
    CoupledState state = CoupledState::at(x0, z0);

    auto record_checkpoint = [&](double t) {
        const CoupledState at = mix_closed_form(state, schedule, t);
        result.trace.checkpoints.push_back({t, state.event_count, metrics_at(at, schedule, problem)});
    };

    std::size_t next_cp = 0;
    const auto& cps = options.checkpoints;
    Vector y;
    for (;;) {
        if (options.max_events != 0 && state.event_count >= options.max_events) break;
        const double t_event = state.t + sample_interarrival(clock, rng.clock);
        const bool past_horizon = t_event > horizon;
        while (next_cp < cps.size() && cps[next_cp] < t_event) record_checkpoint(cps[next_cp++]);
        if (past_horizon) break;

        mix_closed_form_inplace(state, schedule, t_event);
        y = state.x;
        jump(state, t_event, y);
        if (options.on_event) options.on_event({state.event_count, t_event, y, state.x, state.z});
        if (options.record_events) {
            result.trace.events.push_back({t_event, state.event_count, metrics_at(state, schedule, problem)});
        }
    }
    while (next_cp < cps.size()) record_checkpoint(cps[next_cp++]);
    if (std::isfinite(horizon) && horizon > state.t) mix_closed_form_inplace(state, schedule, horizon);
    result.terminal = std::move(state);
    return result;
}

}  // namespace

ContinuizedResult run_continuized(const ConvexProblem& problem, const NoiseModel& noise,
                                  const ParamSchedule& schedule, const EventClock& clock,
                                  double horizon, RunRng& rng, const Vector& x0, const Vector& z0,
                                  const RunOptions& options) {
    if (noise.kind == NoiseKind::multiplicative && !problem.least_squares) {
        throw InvalidArgument("multiplicative noise requires a least-squares problem");
    }
    Vector g;
    return event_loop(problem, schedule, clock, horizon, rng, x0, z0, options,
                      [&](CoupledState& state, double t_event, const Vector& y) {
                          const ScheduleValues p = schedule_eval(schedule, t_event);
                          stochastic_gradient_into(problem, noise, y, rng.marks, g);
                          gradient_jump_inplace(state, p.gamma, p.gamma_prime, g);
                      });
}

ContinuizedResult run_continuized(const ConvexProblem& problem, const NoiseModel& noise,
                                  const ParamSchedule& schedule, const EventClock& clock,
                                  double horizon, RunRng& rng, const RunOptions& options) {
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(problem.dimension));
    return run_continuized(problem, noise, schedule, clock, horizon, rng, zero, zero, options);
}

namespace {

std::vector<double> cumulative_probs(const std::vector<double>& probs, std::size_t dimension) {
    if (probs.size() != dimension) {
        throw DimensionMismatch("coordinate probabilities", dimension, probs.size());
    }
    std::vector<double> cumulative(probs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (!(probs[i] > 0.0)) throw InvalidArgument("coordinate probabilities must be positive");
        total += probs[i];
        cumulative[i] = total;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("coordinate probabilities must sum to 1");
    return cumulative;
}

}  // namespace

ContinuizedResult run_coordinate(const ConvexProblem& problem, const std::vector<double>& probs,
                                 const ParamSchedule& schedule, double horizon, RunRng& rng,
                                 const Vector& x0, const RunOptions& options) {
    const std::vector<double> cumulative = cumulative_probs(probs, problem.dimension);
    Vector full;
    Vector g = Vector::Zero(static_cast<Eigen::Index>(problem.dimension));
    return event_loop(problem, schedule, EventClock::exponential(1.0), horizon, rng, x0, x0, options,
                      [&](CoupledState& state, double t_event, const Vector& y) {
                          const ScheduleValues p = schedule_eval(schedule, t_event);
                          const std::size_t i = rng.marks.categorical(cumulative);
                          const auto ii = static_cast<Eigen::Index>(i);
                          gradient_into(problem, y, full);
                          g.setZero();
                          g[ii] = full[ii] / probs[i];
                          gradient_jump_inplace(state, p.gamma, p.gamma_prime, g, 1.0 / probs[i]);
                      });
}

double coordinate_smoothness(const std::vector<double>& diag_smoothness,
                             const std::vector<double>& probs) {
    if (diag_smoothness.size() != probs.size()) {
        throw DimensionMismatch("coordinate smoothness", probs.size(), diag_smoothness.size());
    }
    double L = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        L = std::max(L, diag_smoothness[i] / (probs[i] * probs[i]));
    }
    return L;
}

}  // namespace continuized
