#pragma once

#include "continuized/linalg.hpp"
#include "continuized/rng.hpp"

#include <memory>
#include <span>
#include <vector>

namespace continuized {

/// Value and gradient of a smooth convex objective.
class Objective {
public:
    virtual ~Objective() = default;
    virtual double value(const Vector& x) const = 0;
    virtual void gradient(const Vector& x, Vector& out) const = 0;
};

/// One atom (a, b) of a finite least-squares distribution.
struct Sample {
    Vector a;
    double b = 0.0;
    double weight = 0.0;
};

/// f(x) = E[(b - <x,a>)^2 / 2] over a finite weighted sample list, noiseless
/// (b = <x_*, a> on every atom). Expectations are exact sums.
struct LeastSquaresProblem {
    std::vector<Sample> samples;
    std::vector<double> cumulative;  // running sum of weights, for sampling
    Matrix hessian;                  // H = E[a a^T]
    Vector linear;                   // E[b a]
    double mean_b2 = 0.0;            // E[b^2]
    Matrix hessian_pinv;             // H^+
    Vector optimum;                  // minimum-norm x_*
    double r_squared = 0.0;
    double kappa_tilde = 0.0;
};

/// A convex objective together with the constants the schedules consume.
struct ConvexProblem {
    std::size_t dimension = 0;
    std::shared_ptr<const Objective> objective;
    Vector optimum;
    double optimum_value = 0.0;
    double smoothness = 0.0;        // L
    double strong_convexity = 0.0;  // mu (0 when only convex)
    /// Present for the least-squares family; required by multiplicative noise.
    std::shared_ptr<const LeastSquaresProblem> least_squares;

    double value(const Vector& x) const;
    double gap(const Vector& x) const { return value(x) - optimum_value; }
};

/// Diagonal quadratic f(x) = 1/2 sum_i d_i (x_i - c_i)^2.
ConvexProblem make_quadratic(std::span<const double> diag, std::span<const double> center);
ConvexProblem make_quadratic(const Vector& diag, const Vector& center);

/// 100-dimensional convex test function: d_i = 1/i^2, c_i = 1/i.
ConvexProblem appendix_convex_problem(std::size_t dimension = 100);
/// Three-dimensional strongly convex test function: d = (mu, 3 mu, L), c = (1, 1, 1).
ConvexProblem appendix_strongly_convex_problem(double mu = 1e-2, double L = 1.0);

/// Builds a least-squares problem. Weights must be positive and sum to 1 (1e-9);
/// the data must be noiseless to 1e-10.
ConvexProblem make_least_squares(std::vector<Sample> samples);

/// (R^2, kappa_tilde): smallest constants with E[|a|^2 a a^T] <= R^2 H and
/// E[|a|^2_{H^+} a a^T] <= kappa_tilde H, computed on the range of H.
struct StatisticalConstants {
    double r_squared;
    double kappa_tilde;
};
StatisticalConstants compute_r2_kappa_tilde(const LeastSquaresProblem& problem);

Vector gradient(const ConvexProblem& problem, const Vector& x);
void gradient_into(const ConvexProblem& problem, const Vector& x, Vector& out);

enum class NoiseKind { none, additive, multiplicative };

struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double sigma2 = 0.0;  // total variance E|xi|^2 for the additive kind

    static NoiseModel none() { return {}; }
    static NoiseModel additive(double sigma2);
    static NoiseModel multiplicative() { return {NoiseKind::multiplicative, 0.0}; }
};

/// Unbiased stochastic gradient. Additive: grad + N(0, sigma2/d I).
/// Multiplicative: -(b - <x,a>) a for one atom drawn from the sample weights.
void stochastic_gradient_into(const ConvexProblem& problem, const NoiseModel& noise,
                              const Vector& x, Stream& rng, Vector& out);
Vector stochastic_gradient(const ConvexProblem& problem, const NoiseModel& noise,
                           const Vector& x, Stream& rng);

/// |v|^2_{H^+} for the least-squares Hessian.
double hessian_pinv_norm2(const LeastSquaresProblem& problem, const Vector& v);

}  // namespace continuized
