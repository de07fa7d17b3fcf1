#include "continuized/errors.hpp"
#include "continuized/problems.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace continuized;

TEST_CASE("strongly convex test function constants") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    CHECK(p.dimension == 3);
    CHECK(p.smoothness == doctest::Approx(1.0));
    CHECK(p.strong_convexity == doctest::Approx(1e-2));
    CHECK(p.value(Vector::Zero(3)) == doctest::Approx(0.52).epsilon(1e-14));
    CHECK((p.optimum - Vector::Ones(3)).norm() == 0.0);
    CHECK(p.optimum_value == 0.0);
}

TEST_CASE("convex test function constants and gradient") {
    const ConvexProblem p = appendix_convex_problem();
    CHECK(p.dimension == 100);
    CHECK(p.smoothness == doctest::Approx(1.0));
    CHECK(p.strong_convexity == doctest::Approx(1e-4));
    const Vector g = gradient(p, Vector::Zero(100));
    const Vector fd = oracle::fd_gradient([&](const Vector& x) { return p.value(x); }, Vector::Zero(100), 1e-6);
    for (int i = 0; i < 100; ++i) {
        const double k = i + 1.0;
        REQUIRE(g[i] == doctest::Approx(-1.0 / (k * k * k)).epsilon(1e-12));
        REQUIRE(std::abs(fd[i] - g[i]) < 1e-4);
    }
}

TEST_CASE("quadratic gradients agree with finite differences at random points") {
    const std::vector<double> d{0.5, 2.0, 3.0, 0.1};
    const std::vector<double> c{1.0, -1.0, 0.5, 2.0};
    const ConvexProblem p = make_quadratic(d, c);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 20; ++rep) {
        Vector x(4);
        for (int i = 0; i < 4; ++i) x[i] = n(gen);
        const Vector fd = oracle::fd_gradient([&](const Vector& y) { return p.value(y); }, x, 1e-6);
        CHECK((fd - gradient(p, x)).norm() < 1e-6);
    }
}

TEST_CASE("quadratic construction rejects bad input") {
    CHECK_THROWS_AS(make_quadratic(std::vector<double>{}, std::vector<double>{}), InvalidProblem);
    CHECK_THROWS_AS(make_quadratic(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}), InvalidProblem);
    CHECK_THROWS_AS(make_quadratic(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0}), InvalidProblem);
    CHECK_THROWS_AS(make_quadratic(std::vector<double>{1.0, -2.0}, std::vector<double>{1.0, 1.0}), InvalidProblem);
    const ConvexProblem p = appendix_strongly_convex_problem();
    CHECK_THROWS_AS(gradient(p, Vector::Zero(4)), DimensionMismatch);
}

namespace {

std::vector<Sample> random_samples(int n, int d, std::uint64_t seed, const Vector& xstar) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.5, 1.5);
    std::vector<Sample> s(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& smp : s) {
        smp.a = Vector(d);
        for (int i = 0; i < d; ++i) smp.a[i] = nd(gen);
        smp.b = smp.a.dot(xstar);
        smp.weight = ud(gen);
        total += smp.weight;
    }
    for (auto& smp : s) smp.weight /= total;
    return s;
}

/// Smallest c with M <= c H on range(H), evaluated independently with Jacobi.
double brute_constant(const Eigen::MatrixXd& M, const Eigen::MatrixXd& H) {
    Eigen::MatrixXd V;
    const Eigen::VectorXd w = oracle::jacobi_eigenvalues(H, &V);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(H.rows(), H.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] > 1e-9) S += V.col(i) * V.col(i).transpose() / std::sqrt(w[i]);
    const Eigen::MatrixXd T = S * M * S;
    return oracle::jacobi_eigenvalues(0.5 * (T + T.transpose())).maxCoeff();
}

}  // namespace

TEST_CASE("coordinate sampling has R^2 = kappa_tilde = d") {
    const int d = 5;
    std::vector<Sample> s;
    Vector xstar = Vector::LinSpaced(d, 1.0, 2.0);
    for (int i = 0; i < d; ++i) {
        Sample smp;
        smp.a = std::sqrt(double(d)) * Vector::Unit(d, i);
        smp.b = smp.a.dot(xstar);
        smp.weight = 1.0 / d;
        s.push_back(smp);
    }
    const ConvexProblem p = make_least_squares(s);
    REQUIRE(p.least_squares);
    CHECK((p.least_squares->hessian - Matrix::Identity(d, d)).norm() < 1e-12);
    CHECK(p.least_squares->r_squared == doctest::Approx(d).epsilon(1e-10));
    CHECK(p.least_squares->kappa_tilde == doctest::Approx(d).epsilon(1e-10));
    CHECK((p.optimum - xstar).norm() < 1e-10);
}

TEST_CASE("R^2 and kappa_tilde match brute-force matrix evaluation") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const int d = 4;
        const Vector xstar = Vector::Ones(d);
        const auto s = random_samples(12, d, seed, xstar);
        const ConvexProblem p = make_least_squares(s);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d), M1 = H, M2 = H;
        for (const auto& smp : s) H += smp.weight * smp.a * smp.a.transpose();
        const Eigen::MatrixXd Hp = oracle::jacobi_pinv(H);
        for (const auto& smp : s) {
            M1 += smp.weight * smp.a.squaredNorm() * smp.a * smp.a.transpose();
            M2 += smp.weight * smp.a.dot(Hp * smp.a) * smp.a * smp.a.transpose();
        }
        const double r2 = brute_constant(M1, H);
        const double kt = brute_constant(M2, H);
        CHECK(p.least_squares->r_squared == doctest::Approx(r2).epsilon(1e-8));
        CHECK(p.least_squares->kappa_tilde == doctest::Approx(kt).epsilon(1e-8));
        // Defining inequalities hold and are tight.
        CHECK(oracle::jacobi_eigenvalues(r2 * H - M1).minCoeff() > -1e-9);
        CHECK(oracle::jacobi_eigenvalues(kt * H - M2).minCoeff() > -1e-9);
        CHECK(kt <= r2 * Hp.norm() + 1e-9);
        CHECK(kt >= d - 1e-9);  // trace argument: E|a|^2_{H^+} = rank(H)
        CHECK((p.optimum - xstar).norm() < 1e-9);
        CHECK(p.value(xstar) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("rank-deficient least squares uses the minimum-norm optimum") {
    std::vector<Sample> s;
    Sample a;
    a.a = Vector(3);
    a.a << 1.0, 1.0, 0.0;
    a.b = 2.0;
    a.weight = 0.5;
    Sample b = a;
    b.a << 1.0, -1.0, 0.0;
    b.b = 0.0;
    s = {a, b};
    const ConvexProblem p = make_least_squares(s);
    Vector expected(3);
    expected << 1.0, 1.0, 0.0;
    CHECK((p.optimum - expected).norm() < 1e-12);
    CHECK(p.strong_convexity == doctest::Approx(1.0));
}

TEST_CASE("least squares rejects bad weights and noisy data") {
    const auto s = random_samples(5, 2, 9, Vector::Ones(2));
    auto bad = s;
    bad[0].weight += 0.1;
    CHECK_THROWS_AS(make_least_squares(bad), InvalidProblem);
    auto neg = s;
    neg[0].weight = -neg[0].weight;
    CHECK_THROWS_AS(make_least_squares(neg), InvalidProblem);
    auto noisy = s;
    noisy[1].b += 0.5;
    CHECK_THROWS_AS(make_least_squares(noisy), InvalidProblem);
    CHECK_THROWS_AS(make_least_squares({}), InvalidProblem);
}

TEST_CASE("additive noise is centred with total variance sigma^2") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    const NoiseModel noise = NoiseModel::additive(0.3);
    Stream rng(17);
    const Vector x = Vector::Zero(3);
    const Vector g = gradient(p, x);
    const int n = 20000;
    Vector mean = Vector::Zero(3);
    double second = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vector xi = stochastic_gradient(p, noise, x, rng) - g;
        mean += xi;
        second += xi.squaredNorm();
    }
    mean /= n;
    second /= n;
    // Per-coordinate variance 0.1, so the mean has standard error sqrt(0.1/n).
    CHECK(mean.cwiseAbs().maxCoeff() < 3 * std::sqrt(0.1 / n));
    // Var |xi|^2 = 2 * 3 * 0.1^2 for a Gaussian.
    CHECK(std::abs(second - 0.3) < 3 * std::sqrt(0.06 / n));

    Stream r2(1);
    CHECK((stochastic_gradient(p, NoiseModel::additive(0.0), x, r2) - g).norm() == 0.0);
    CHECK((stochastic_gradient(p, NoiseModel::none(), x, r2) - g).norm() == 0.0);
    CHECK_THROWS_AS(NoiseModel::additive(-1.0), InvalidArgument);
}

TEST_CASE("multiplicative noise is unbiased") {
    const Vector xstar = Vector::LinSpaced(3, -1.0, 1.0);
    const auto s = random_samples(6, 3, 4, xstar);
    const ConvexProblem p = make_least_squares(s);
    const Vector x = Vector::Constant(3, 0.3);
    // Exact expectation over the atoms.
    Vector exact = Vector::Zero(3);
    for (const auto& smp : s) exact += smp.weight * (-(smp.b - x.dot(smp.a)) * smp.a);
    CHECK((exact - gradient(p, x)).norm() < 1e-12);

    Stream rng(8);
    const int n = 50000;
    Vector mean = Vector::Zero(3);
    Vector sq = Vector::Zero(3);
    for (int i = 0; i < n; ++i) {
        const Vector g = stochastic_gradient(p, NoiseModel::multiplicative(), x, rng);
        mean += g;
        sq += g.cwiseProduct(g);
    }
    mean /= n;
    const Vector se = ((sq / n - mean.cwiseProduct(mean)) / n).cwiseSqrt();
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mean[i] - exact[i]) < 3 * se[i]);

    // At the optimum every atom has zero residual.
    Stream r2(2);
    CHECK(stochastic_gradient(p, NoiseModel::multiplicative(), p.optimum, r2).norm() < 1e-12);
    CHECK_THROWS_AS(stochastic_gradient(appendix_strongly_convex_problem(), NoiseModel::multiplicative(),
                                        Vector::Zero(3), r2),
                    InvalidArgument);
}
