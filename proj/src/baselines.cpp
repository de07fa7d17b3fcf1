#include "continuized/baselines.hpp"

#include "continuized/continuized.hpp"
#include "continuized/errors.hpp"

#include <cmath>

namespace continuized {

Vector nesterov_step(const ConvexProblem& problem, Vector& x, Vector& z, const DiscreteParams& p) {
    Vector y = x + p.tau * (z - x);
    const Vector g = gradient(problem, y);
    x = y - p.gamma * g;
    z = z + p.tau_prime * (y - z) - p.gamma_prime * g;
    return y;
}

std::vector<double> nesterov_a_sequence(std::size_t count) {
    std::vector<double> a(count + 1, 0.0);
    for (std::size_t k = 0; k < count; ++k) a[k + 1] = a[k] + 0.5 * (1.0 + std::sqrt(4.0 * a[k] + 1.0));
    return a;
}

namespace {

void check_start(const ConvexProblem& problem, const Vector& start) {
    if (static_cast<std::size_t>(start.size()) != problem.dimension) {
        throw DimensionMismatch("start point", problem.dimension, static_cast<std::size_t>(start.size()));
    }
}

void push_gap(Trace& trace, const ConvexProblem& problem, std::size_t k, const Vector& x) {
    trace.checkpoints.push_back({static_cast<double>(k), k, {problem.gap(x)}});
}

}  // namespace

Trace run_nesterov(const ConvexProblem& problem, NesterovVariant variant, std::size_t iters,
                   const Vector& start) {
    check_start(problem, start);
    const double L = problem.smoothness;
    const double mu = problem.strong_convexity;
    if (variant == NesterovVariant::strongly_convex && !(mu > 0.0)) {
        throw InvalidArgument("strongly convex Nesterov needs mu > 0");
    }
    Trace trace;
    trace.metrics = {kGapMetric};
    trace.checkpoints.reserve(iters + 1);
    Vector x = start;
    Vector z = start;
    push_gap(trace, problem, 0, x);

    const std::vector<double> a =
        variant == NesterovVariant::convex ? nesterov_a_sequence(iters) : std::vector<double>{};
    const double c = variant == NesterovVariant::strongly_convex ? std::sqrt(mu / L) : 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
        DiscreteParams p{};
        if (variant == NesterovVariant::convex) {
            p = {1.0 - a[k] / a[k + 1], 0.0, 1.0 / L, (a[k + 1] - a[k]) / L};
        } else {
            p = {c / (1.0 + c), c, 1.0 / L, 1.0 / std::sqrt(mu * L)};
        }
        nesterov_step(problem, x, z, p);
        push_gap(trace, problem, k + 1, x);
    }
    return trace;
}

Trace run_nesterov(const ConvexProblem& problem, NesterovVariant variant, std::size_t iters) {
    return run_nesterov(problem, variant, iters,
                        Vector::Zero(static_cast<Eigen::Index>(problem.dimension)));
}

Trace run_gd(const ConvexProblem& problem, double step, std::size_t iters, const Vector& start) {
    check_start(problem, start);
    if (!(step > 0.0) || step > 1.0 / problem.smoothness * (1.0 + 1e-12)) {
        throw InvalidArgument("gradient descent step must lie in (0, 1/L]");
    }
    Trace trace;
    trace.metrics = {kGapMetric};
    trace.checkpoints.reserve(iters + 1);
    Vector x = start;
    Vector g;
    push_gap(trace, problem, 0, x);
    for (std::size_t k = 0; k < iters; ++k) {
        gradient_into(problem, x, g);
        x -= step * g;
        push_gap(trace, problem, k + 1, x);
    }
    return trace;
}

Trace run_gd(const ConvexProblem& problem, double step, std::size_t iters) {
    return run_gd(problem, step, iters, Vector::Zero(static_cast<Eigen::Index>(problem.dimension)));
}

}  // namespace continuized
