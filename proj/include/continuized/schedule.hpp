#pragma once

#include "continuized/rng.hpp"

#include <string_view>

namespace continuized {

/// Parameter regime of the continuized iteration.
enum class ScheduleKind {
    convex,                          // eta = 2/t, gamma = 1/L, gamma' = t/(2L)
    strongly_convex,                 // constant eta = eta' = sqrt(mu/L)
    multiplicative_convex,           // (R^2, kappa_tilde) in place of L
    multiplicative_strongly_convex,  // eta = 1/sqrt(kappa kappa_tilde)
    coordinate_convex,               // coordinate descent, L >= max M R / P^2
    coordinate_strongly_convex,
};

std::string_view to_string(ScheduleKind kind) noexcept;

/// Values of (eta_t, eta'_t, gamma_t, gamma'_t) at one time.
struct ScheduleValues {
    double eta;
    double eta_prime;
    double gamma;
    double gamma_prime;
};

/// Parameters of the three-sequence recursion between two consecutive events.
struct DiscreteParams {
    double tau;
    double tau_prime;
    double gamma;
    double gamma_prime;
};

/// Closed-form time functions selecting one regime.
class ParamSchedule {
public:
    static ParamSchedule convex(double L);
    static ParamSchedule strongly_convex(double L, double mu);
    static ParamSchedule multiplicative_convex(double r_squared, double kappa_tilde);
    static ParamSchedule multiplicative_strongly_convex(double r_squared, double kappa_tilde,
                                                        double mu);
    static ParamSchedule coordinate_convex(double L);
    static ParamSchedule coordinate_strongly_convex(double L, double mu);

    ScheduleKind kind() const noexcept { return kind_; }
    double smoothness() const noexcept { return smoothness_; }  // L, or R^2 for multiplicative
    double strong_convexity() const noexcept { return mu_; }
    double kappa_tilde() const noexcept { return kappa_tilde_; }

    /// True when eta = 2/t, eta' = 0 (the mixing flow is singular at t = 0).
    bool vanishing_mixing() const noexcept;
    /// Constant mixing rate c = eta = eta' for the constant-parameter kinds.
    double mixing_rate() const;
    /// Whether the Lyapunov function uses the multiplicative-noise norms.
    bool multiplicative() const noexcept;

private:
    ParamSchedule(ScheduleKind kind, double smoothness, double mu, double kappa_tilde);

    ScheduleKind kind_;
    double smoothness_;
    double mu_;
    double kappa_tilde_;
};

/// (eta, eta', gamma, gamma') at time t. Throws SingularSchedule for t <= 0 on
/// vanishing-mixing kinds.
ScheduleValues schedule_eval(const ParamSchedule& schedule, double t);

/// Random parameters of the discrete recursion between T_k and T_{k+1}; the jump
/// step gamma' is evaluated at T_{k+1}, the time the jump happens.
DiscreteParams discrete_params(const ParamSchedule& schedule, double t_k, double t_next);

/// Coefficients of phi_t = A_t (f(x_t) - f_*) + B_t/2 |z_t - x_*|^2 (or the
/// multiplicative-noise norms, see `lyapunov_value`).
struct LyapunovCoeffs {
    double a;
    double b;
    bool multiplicative;
};

/// A_t, B_t for the schedule. Constant kinds use A_0 = 1.
LyapunovCoeffs lyapunov_coeffs(const ParamSchedule& schedule, double t);

/// Waiting time between gradient steps.
struct EventClock {
    enum class Kind { exponential, geometric };
    Kind kind = Kind::exponential;
    double rate = 1.0;  // exponential
    double p = 1.0;     // geometric success probability
    double tick = 1.0;  // geometric time unit

    static EventClock exponential(double rate = 1.0);
    static EventClock geometric(double p, double tick);
};

/// Inter-arrival time from a uniform u in (0, 1] (inverse-CDF sampling).
double interarrival_from_uniform(const EventClock& clock, double u);
double sample_interarrival(const EventClock& clock, Stream& rng);

}  // namespace continuized
