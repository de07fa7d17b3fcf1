#include "continuized/problems.hpp"

#include "continuized/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace continuized {

namespace {

class DiagonalQuadratic final : public Objective {
public:
    DiagonalQuadratic(Vector diag, Vector center) : diag_(std::move(diag)), center_(std::move(center)) {}

    double value(const Vector& x) const override {
        return 0.5 * (diag_.array() * (x - center_).array().square()).sum();
    }
    void gradient(const Vector& x, Vector& out) const override {
        out = diag_.cwiseProduct(x - center_);
    }

private:
    Vector diag_;
    Vector center_;
};

/// Noiseless least squares: f(x) = 1/2 (x - x_*)^T H (x - x_*).
class LeastSquaresObjective final : public Objective {
public:
    explicit LeastSquaresObjective(std::shared_ptr<const LeastSquaresProblem> ls) : ls_(std::move(ls)) {}

    double value(const Vector& x) const override {
        const Vector d = x - ls_->optimum;
        return 0.5 * d.dot(ls_->hessian * d);
    }
    void gradient(const Vector& x, Vector& out) const override {
        out.noalias() = ls_->hessian * (x - ls_->optimum);
    }

private:
    std::shared_ptr<const LeastSquaresProblem> ls_;
};

void check_dimension(const ConvexProblem& problem, const Vector& x, const char* what) {
    if (static_cast<std::size_t>(x.size()) != problem.dimension) {
        throw DimensionMismatch(what, problem.dimension, static_cast<std::size_t>(x.size()));
    }
}

}  // namespace

double ConvexProblem::value(const Vector& x) const {
    check_dimension(*this, x, "value");
    return objective->value(x);
}

ConvexProblem make_quadratic(const Vector& diag, const Vector& center) {
    if (diag.size() == 0) throw InvalidProblem("quadratic: empty diagonal");
    if (diag.size() != center.size()) {
        throw InvalidProblem("quadratic: diagonal has " + std::to_string(diag.size()) +
                             " entries but centre has " + std::to_string(center.size()));
    }
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (!(diag[i] > 0.0) || !std::isfinite(diag[i])) {
            throw InvalidProblem("quadratic: diagonal entry " + std::to_string(i) +
                                 " must be positive and finite");
        }
    }
    ConvexProblem p;
    p.dimension = static_cast<std::size_t>(diag.size());
    p.objective = std::make_shared<DiagonalQuadratic>(diag, center);
    p.optimum = center;
    p.optimum_value = 0.0;
    p.smoothness = diag.maxCoeff();
    p.strong_convexity = diag.minCoeff();
    return p;
}

ConvexProblem make_quadratic(std::span<const double> diag, std::span<const double> center) {
    return make_quadratic(Eigen::Map<const Vector>(diag.data(), static_cast<Eigen::Index>(diag.size())),
                          Eigen::Map<const Vector>(center.data(), static_cast<Eigen::Index>(center.size())));
}

ConvexProblem appendix_convex_problem(std::size_t dimension) {
    Vector diag(static_cast<Eigen::Index>(dimension));
    Vector center(static_cast<Eigen::Index>(dimension));
    for (std::size_t i = 0; i < dimension; ++i) {
        const double k = static_cast<double>(i + 1);
        diag[static_cast<Eigen::Index>(i)] = 1.0 / (k * k);
        center[static_cast<Eigen::Index>(i)] = 1.0 / k;
    }
    return make_quadratic(diag, center);
}

ConvexProblem appendix_strongly_convex_problem(double mu, double L) {
    Vector diag(3);
    diag << mu, 3.0 * mu, L;
    return make_quadratic(diag, Vector::Ones(3));
}

ConvexProblem make_least_squares(std::vector<Sample> samples) {
    if (samples.empty()) throw InvalidProblem("least squares: no samples");
    const Eigen::Index d = samples.front().a.size();
    if (d == 0) throw InvalidProblem("least squares: zero-dimensional samples");

    auto ls = std::make_shared<LeastSquaresProblem>();
    ls->hessian = Matrix::Zero(d, d);
    ls->linear = Vector::Zero(d);
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& s = samples[i];
        if (s.a.size() != d) {
            throw InvalidProblem("least squares: sample " + std::to_string(i) + " has dimension " +
                                 std::to_string(s.a.size()) + ", expected " + std::to_string(d));
        }
        if (!(s.weight > 0.0)) {
            throw InvalidProblem("least squares: sample " + std::to_string(i) + " has non-positive weight");
        }
        total += s.weight;
        ls->hessian.noalias() += s.weight * s.a * s.a.transpose();
        ls->linear += s.weight * s.b * s.a;
        ls->mean_b2 += s.weight * s.b * s.b;
        ls->cumulative.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidProblem("least squares: weights sum to " + std::to_string(total) + ", expected 1");
    }

    const SymmetricEigen eig = symmetric_eigen(ls->hessian);
    ls->hessian_pinv = psd_pseudo_inverse(eig);
    ls->optimum = ls->hessian_pinv * ls->linear;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double residual = samples[i].b - ls->optimum.dot(samples[i].a);
        if (std::abs(residual) > 1e-10) {
            throw InvalidProblem("least squares: sample " + std::to_string(i) +
                                 " is inconsistent with a noiseless model (residual " +
                                 std::to_string(residual) + ")");
        }
    }
    ls->samples = std::move(samples);
    const StatisticalConstants c = compute_r2_kappa_tilde(*ls);
    ls->r_squared = c.r_squared;
    ls->kappa_tilde = c.kappa_tilde;

    const double tol = rank_tolerance(eig);
    double mu = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (eig.values[i] > tol) {
            mu = eig.values[i];
            break;
        }
    }

    ConvexProblem p;
    p.dimension = static_cast<std::size_t>(d);
    p.optimum = ls->optimum;
    p.optimum_value = 0.0;
    p.smoothness = eig.values[d - 1];
    // Restricted to the range of H: the iterates never leave x_0 + range(H).
    p.strong_convexity = mu;
    p.least_squares = ls;
    p.objective = std::make_shared<LeastSquaresObjective>(ls);
    return p;
}

StatisticalConstants compute_r2_kappa_tilde(const LeastSquaresProblem& problem) {
    const Eigen::Index d = problem.hessian.rows();
    const SymmetricEigen eig = symmetric_eigen(problem.hessian);
    const Matrix projector = range_projector(eig);
    const Matrix pinv = psd_pseudo_inverse(eig);
    const Matrix inv_sqrt = psd_pseudo_inverse_sqrt(eig);

    Matrix fourth = Matrix::Zero(d, d);
    Matrix weighted = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < problem.samples.size(); ++i) {
        const Sample& s = problem.samples[i];
        const double norm = s.a.norm();
        if ((s.a - projector * s.a).norm() > 1e-9 * std::max(norm, 1.0)) {
            throw InvalidProblem("least squares: sample " + std::to_string(i) +
                                 " leaves the range of the Hessian");
        }
        const Matrix outer = s.a * s.a.transpose();
        fourth.noalias() += s.weight * s.a.squaredNorm() * outer;
        weighted.noalias() += s.weight * s.a.dot(pinv * s.a) * outer;
    }
    const Matrix r_mat = inv_sqrt * fourth * inv_sqrt;
    const Matrix k_mat = inv_sqrt * weighted * inv_sqrt;
    return {symmetric_eigen(0.5 * (r_mat + r_mat.transpose())).values.maxCoeff(),
            symmetric_eigen(0.5 * (k_mat + k_mat.transpose())).values.maxCoeff()};
}

void gradient_into(const ConvexProblem& problem, const Vector& x, Vector& out) {
    check_dimension(problem, x, "gradient");
    problem.objective->gradient(x, out);
}

Vector gradient(const ConvexProblem& problem, const Vector& x) {
    Vector g;
    gradient_into(problem, x, g);
    return g;
}

NoiseModel NoiseModel::additive(double sigma2) {
    if (!(sigma2 >= 0.0)) throw InvalidArgument("additive noise: sigma2 must be >= 0");
    return {NoiseKind::additive, sigma2};
}

void stochastic_gradient_into(const ConvexProblem& problem, const NoiseModel& noise,
                              const Vector& x, Stream& rng, Vector& out) {
    switch (noise.kind) {
    case NoiseKind::none:
        gradient_into(problem, x, out);
        return;
    case NoiseKind::additive: {
        gradient_into(problem, x, out);
        if (noise.sigma2 == 0.0) return;
        const double sd = std::sqrt(noise.sigma2 / static_cast<double>(problem.dimension));
        for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += sd * rng.normal();
        return;
    }
    case NoiseKind::multiplicative: {
        if (!problem.least_squares) {
            throw InvalidArgument("multiplicative noise requires a least-squares problem");
        }
        check_dimension(problem, x, "stochastic_gradient");
        const LeastSquaresProblem& ls = *problem.least_squares;
        const Sample& s = ls.samples[rng.categorical(ls.cumulative)];
        out = -(s.b - x.dot(s.a)) * s.a;
        return;
    }
    }
}

Vector stochastic_gradient(const ConvexProblem& problem, const NoiseModel& noise, const Vector& x,
                           Stream& rng) {
    Vector g;
    stochastic_gradient_into(problem, noise, x, rng, g);
    return g;
}

double hessian_pinv_norm2(const LeastSquaresProblem& problem, const Vector& v) {
    return v.dot(problem.hessian_pinv * v);
}

}  // namespace continuized
