#include "continuized/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace continuized {

SymmetricEigen symmetric_eigen(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double rank_tolerance(const SymmetricEigen& eig, double relative) {
    const double scale = eig.values.size() == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
    return relative * std::max(scale, 1e-300);
}

namespace {

template <class F>
Matrix spectral_map(const SymmetricEigen& eig, double relative, F f) {
    const double tol = rank_tolerance(eig, relative);
    const auto n = eig.values.size();
    Vector mapped = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.values[i] > tol) mapped[i] = f(eig.values[i]);
    }
    return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

}  // namespace

Matrix psd_pseudo_inverse(const SymmetricEigen& eig, double relative) {
    return spectral_map(eig, relative, [](double l) { return 1.0 / l; });
}

Matrix psd_pseudo_inverse_sqrt(const SymmetricEigen& eig, double relative) {
    return spectral_map(eig, relative, [](double l) { return 1.0 / std::sqrt(l); });
}

Matrix range_projector(const SymmetricEigen& eig, double relative) {
    return spectral_map(eig, relative, [](double) { return 1.0; });
}

}  // namespace continuized
