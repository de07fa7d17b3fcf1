#include "continuized/schedule.hpp"

#include "continuized/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace continuized {

std::string_view to_string(ScheduleKind kind) noexcept {
    switch (kind) {
    case ScheduleKind::convex: return "convex";
    case ScheduleKind::strongly_convex: return "strongly_convex";
    case ScheduleKind::multiplicative_convex: return "multiplicative_convex";
    case ScheduleKind::multiplicative_strongly_convex: return "multiplicative_strongly_convex";
    case ScheduleKind::coordinate_convex: return "coordinate_convex";
    case ScheduleKind::coordinate_strongly_convex: return "coordinate_strongly_convex";
    }
    return "unknown";
}

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string("schedule: ") + name + " must be positive and finite");
    }
}

}  // namespace

ParamSchedule::ParamSchedule(ScheduleKind kind, double smoothness, double mu, double kappa_tilde)
    : kind_(kind), smoothness_(smoothness), mu_(mu), kappa_tilde_(kappa_tilde) {}

ParamSchedule ParamSchedule::convex(double L) {
    require_positive(L, "L");
    return {ScheduleKind::convex, L, 0.0, 0.0};
}

ParamSchedule ParamSchedule::strongly_convex(double L, double mu) {
    require_positive(L, "L");
    require_positive(mu, "mu");
    return {ScheduleKind::strongly_convex, L, mu, 0.0};
}

ParamSchedule ParamSchedule::multiplicative_convex(double r_squared, double kappa_tilde) {
    require_positive(r_squared, "R^2");
    require_positive(kappa_tilde, "kappa_tilde");
    return {ScheduleKind::multiplicative_convex, r_squared, 0.0, kappa_tilde};
}

ParamSchedule ParamSchedule::multiplicative_strongly_convex(double r_squared, double kappa_tilde,
                                                            double mu) {
    require_positive(r_squared, "R^2");
    require_positive(kappa_tilde, "kappa_tilde");
    require_positive(mu, "mu");
    return {ScheduleKind::multiplicative_strongly_convex, r_squared, mu, kappa_tilde};
}

ParamSchedule ParamSchedule::coordinate_convex(double L) {
    require_positive(L, "L");
    return {ScheduleKind::coordinate_convex, L, 0.0, 0.0};
}

ParamSchedule ParamSchedule::coordinate_strongly_convex(double L, double mu) {
    require_positive(L, "L");
    require_positive(mu, "mu");
    return {ScheduleKind::coordinate_strongly_convex, L, mu, 0.0};
}

bool ParamSchedule::vanishing_mixing() const noexcept {
    return kind_ == ScheduleKind::convex || kind_ == ScheduleKind::multiplicative_convex ||
           kind_ == ScheduleKind::coordinate_convex;
}

bool ParamSchedule::multiplicative() const noexcept {
    return kind_ == ScheduleKind::multiplicative_convex ||
           kind_ == ScheduleKind::multiplicative_strongly_convex;
}

double ParamSchedule::mixing_rate() const {
    switch (kind_) {
    case ScheduleKind::strongly_convex:
    case ScheduleKind::coordinate_strongly_convex:
        return std::sqrt(mu_ / smoothness_);
    case ScheduleKind::multiplicative_strongly_convex:
        // kappa = R^2 / mu; eta = 1 / sqrt(kappa kappa_tilde)
        return 1.0 / std::sqrt(smoothness_ / mu_ * kappa_tilde_);
    default:
        throw InvalidArgument("schedule " + std::string(to_string(kind_)) +
                              " has no constant mixing rate");
    }
}

ScheduleValues schedule_eval(const ParamSchedule& s, double t) {
    const double L = s.smoothness();
    switch (s.kind()) {
    case ScheduleKind::convex:
    case ScheduleKind::coordinate_convex:
        if (!(t > 0.0)) throw SingularSchedule("convex schedule is singular at t = 0 (eta_t = 2/t)");
        return {2.0 / t, 0.0, 1.0 / L, t / (2.0 * L)};
    case ScheduleKind::multiplicative_convex:
        if (!(t > 0.0)) throw SingularSchedule("convex schedule is singular at t = 0 (eta_t = 2/t)");
        return {2.0 / t, 0.0, 1.0 / L, t / (2.0 * L * s.kappa_tilde())};
    case ScheduleKind::strongly_convex:
    case ScheduleKind::coordinate_strongly_convex: {
        const double c = std::sqrt(s.strong_convexity() / L);
        return {c, c, 1.0 / L, 1.0 / std::sqrt(s.strong_convexity() * L)};
    }
    case ScheduleKind::multiplicative_strongly_convex: {
        const double kappa = L / s.strong_convexity();
        const double c = 1.0 / std::sqrt(kappa * s.kappa_tilde());
        return {c, c, 1.0 / L, std::sqrt(kappa / s.kappa_tilde()) / L};
    }
    }
    throw InvalidArgument("unknown schedule kind");
}

DiscreteParams discrete_params(const ParamSchedule& s, double t_k, double t_next) {
    if (!(t_k >= 0.0) || !(t_next > t_k)) {
        throw InvalidArgument("discrete_params: need 0 <= T_k < T_next, got T_k = " +
                              std::to_string(t_k) + ", T_next = " + std::to_string(t_next));
    }
    const ScheduleValues jump = schedule_eval(s, t_next);
    if (s.vanishing_mixing()) {
        const double ratio = t_k / t_next;
        return {1.0 - ratio * ratio, 0.0, jump.gamma, jump.gamma_prime};
    }
    const double c = s.mixing_rate();
    const double gap = t_next - t_k;
    return {-0.5 * std::expm1(-2.0 * c * gap), std::tanh(c * gap), jump.gamma, jump.gamma_prime};
}

LyapunovCoeffs lyapunov_coeffs(const ParamSchedule& s, double t) {
    const double L = s.smoothness();
    switch (s.kind()) {
    case ScheduleKind::convex:
    case ScheduleKind::coordinate_convex:
        return {t * t / (4.0 * L), 1.0, false};
    case ScheduleKind::multiplicative_convex:
        return {t * t / (4.0 * L * s.kappa_tilde()), 1.0, true};
    case ScheduleKind::strongly_convex:
    case ScheduleKind::coordinate_strongly_convex:
    case ScheduleKind::multiplicative_strongly_convex: {
        const double a = std::exp(s.mixing_rate() * t);
        return {a, s.strong_convexity() * a, s.multiplicative()};
    }
    }
    throw InvalidArgument("unknown schedule kind");
}

EventClock EventClock::exponential(double rate) {
    if (!(rate > 0.0)) throw InvalidArgument("exponential clock: rate must be positive");
    EventClock c;
    c.kind = Kind::exponential;
    c.rate = rate;
    return c;
}

EventClock EventClock::geometric(double p, double tick) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("geometric clock: p must be in (0, 1]");
    if (!(tick > 0.0)) throw InvalidArgument("geometric clock: tick must be positive");
    EventClock c;
    c.kind = Kind::geometric;
    c.p = p;
    c.tick = tick;
    return c;
}

double interarrival_from_uniform(const EventClock& clock, double u) {
    if (clock.kind == EventClock::Kind::exponential) return -std::log(u) / clock.rate;
    if (clock.p >= 1.0) return clock.tick;
    // Number of Bernoulli(p) trials up to and including the first success.
    const double trials = std::ceil(std::log(u) / std::log1p(-clock.p));
    return clock.tick * std::max(1.0, trials);
}

double sample_interarrival(const EventClock& clock, Stream& rng) {
    return interarrival_from_uniform(clock, rng.uniform_open_zero());
}

}  // namespace continuized
