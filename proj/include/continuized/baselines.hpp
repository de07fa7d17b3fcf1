#pragma once

#include "continuized/linalg.hpp"
#include "continuized/problems.hpp"
#include "continuized/schedule.hpp"
#include "continuized/trace.hpp"

#include <vector>

namespace continuized {

/// One step of the three-sequence recursion
///   y = x + tau (z - x); x+ = y - gamma g(y); z+ = z + tau' (y - z) - gamma' g(y).
/// Returns y; x and z are updated in place.
Vector nesterov_step(const ConvexProblem& problem, Vector& x, Vector& z, const DiscreteParams& p);

/// A_0 = 0, A_{k+1} = A_k + (1 + sqrt(4 A_k + 1)) / 2.
std::vector<double> nesterov_a_sequence(std::size_t count);

enum class NesterovVariant { convex, strongly_convex };

/// Classical accelerated gradient from x0 = z0 = start. Sample k holds gap(x_k).
Trace run_nesterov(const ConvexProblem& problem, NesterovVariant variant, std::size_t iters,
                   const Vector& start);
Trace run_nesterov(const ConvexProblem& problem, NesterovVariant variant, std::size_t iters);

/// x <- x - step grad f(x). Requires 0 < step <= 1/L.
Trace run_gd(const ConvexProblem& problem, double step, std::size_t iters, const Vector& start);
Trace run_gd(const ConvexProblem& problem, double step, std::size_t iters);

}  // namespace continuized
