#pragma once

// Eigen-backed reference computations. Nothing here calls into the library's
// own kernels, so agreement is a real cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include <heterosolve/dense_matrix.hpp>

namespace oracle {

using heterosolve::DenseMatrix;
using heterosolve::Vector;

inline Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline Eigen::VectorXd to_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

/// Singular values, descending.
inline Eigen::VectorXd singular_values(const DenseMatrix& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(to_eigen(m)).singularValues();
}

inline double condition(const DenseMatrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    return s(0) / s(s.size() - 1);
}

/// Eigenvalues of a symmetric matrix, descending.
inline std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.rbegin(), v.rend());
    return v;
}

inline double spectral_radius(const DenseMatrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Orthogonal projector onto the row space of a (full row rank): A^T (A A^T)^{-1} A.
inline Eigen::MatrixXd rowspace_projector(const DenseMatrix& a) {
    const Eigen::MatrixXd e = to_eigen(a);
    return e.transpose() * (e * e.transpose()).ldlt().solve(e);
}

/// S = sum_i A_i^T (A_i A_i^T)^{-1} A_i for contiguous row blocks.
inline Eigen::MatrixXd s_matrix(const DenseMatrix& a, const std::vector<std::size_t>& sizes) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(a.cols(), a.cols());
    std::size_t off = 0;
    for (std::size_t p : sizes) {
        s += rowspace_projector(a.row_block(off, p));
        off += p;
    }
    return s;
}

inline double kappa_s(const DenseMatrix& a, const std::vector<std::size_t>& sizes) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_matrix(a, sizes), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

/// Minimal principal angle between the row spaces of two blocks via the
/// cosines of the principal angles (SVD of Q1^T Q2).
inline double block_angle(const DenseMatrix& a1, const DenseMatrix& a2) {
    const Eigen::MatrixXd q1 = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(a1).transpose()).householderQ() *
                               Eigen::MatrixXd::Identity(a1.cols(), a1.rows());
    const Eigen::MatrixXd q2 = Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(a2).transpose()).householderQ() *
                               Eigen::MatrixXd::Identity(a2.cols(), a2.rows());
    const double c = Eigen::JacobiSVD<Eigen::MatrixXd>(q1.transpose() * q2).singularValues()(0);
    return std::acos(std::clamp(c, 0.0, 1.0));
}

/// |cos| of the angle between two vectors, then arccos.
inline double vector_angle(std::span<const double> x, std::span<const double> y) {
    double xy = 0, xx = 0, yy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        xy += x[k] * y[k];
        xx += x[k] * x[k];
        yy += y[k] * y[k];
    }
    return std::acos(std::clamp(std::abs(xy) / std::sqrt(xx * yy), 0.0, 1.0));
}

inline DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, double mean = 0.0) {
    std::mt19937_64 eng(seed ^ 0x5bd1e995u);
    std::normal_distribution<double> d(mean, 1.0);
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(eng);
    return m;
}

/// Random orthogonal matrix plus a Gaussian perturbation of size eps: rows
/// are nearly orthogonal, so cross-machine angles stay close to pi/2.
inline DenseMatrix near_orthogonal(std::size_t n, double eps, std::uint64_t seed) {
    const Eigen::MatrixXd g = to_eigen(random_gaussian(n, n, seed));
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const Eigen::MatrixXd p = to_eigen(random_gaussian(n, n, seed + 1));
    return from_eigen(q + eps / std::sqrt(static_cast<double>(n)) * p);
}

}  // namespace oracle
