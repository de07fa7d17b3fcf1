#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace continuized {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// One row per graph node; row-major so that per-node access is contiguous.
using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;  // columns are eigenvectors
};

SymmetricEigen symmetric_eigen(const Matrix& m);

/// Numerical rank threshold used to decide which eigenvalues count as zero.
double rank_tolerance(const SymmetricEigen& eig, double relative = 1e-10);

/// Moore-Penrose pseudo-inverse of a symmetric positive semidefinite matrix.
Matrix psd_pseudo_inverse(const SymmetricEigen& eig, double relative = 1e-10);

/// (M^+)^{1/2}: inverse square root on the range, zero on the kernel.
Matrix psd_pseudo_inverse_sqrt(const SymmetricEigen& eig, double relative = 1e-10);

/// Orthogonal projector onto the range of a PSD matrix.
Matrix range_projector(const SymmetricEigen& eig, double relative = 1e-10);

}  // namespace continuized
