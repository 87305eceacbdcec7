#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "heterosolve/dense_matrix.hpp"

/// Dense linear-algebra primitives shared by every other module.
///
/// All functions are pure: they take their inputs by const reference and
/// return fresh values, so they are safe to call concurrently.
namespace heterosolve::numkernel {

/// Relative threshold below which a pivot, diagonal of R or singular value is
/// treated as zero.
inline constexpr double kRankTolerance = 1e-12;

/// Absolute tolerance (relative to max |m_ij|, floor 1) for accepting a matrix
/// as symmetric.
inline constexpr double kSymmetryTolerance = 1e-10;

struct QrResult {
    DenseMatrix q;  ///< rows x cols, orthonormal columns
    DenseMatrix r;  ///< cols x cols, upper triangular, nonnegative diagonal
};

/// Thin Householder QR of a square or tall matrix.
///
/// The diagonal of R is made nonnegative by flipping the sign of the
/// matching column of Q. Throws RankDeficient when some |r_kk| falls below
/// kRankTolerance times the largest column norm of `m`, and
/// DimensionMismatch for wide input.
QrResult qr_decompose(const DenseMatrix& m);

/// Eigenvalues of a symmetric matrix, sorted descending.
struct Spectrum {
    std::vector<double> eigenvalues;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] double max() const { return eigenvalues.front(); }
    [[nodiscard]] double min() const { return eigenvalues.back(); }
    /// max/min; +inf when min <= 0.
    [[nodiscard]] double condition() const;
};

struct SymmetricEigen {
    Spectrum spectrum;
    DenseMatrix vectors;  ///< column k pairs with spectrum.eigenvalues[k]
};

/// Throws NotSymmetric if `m` deviates from symmetry by more than
/// kSymmetryTolerance.
Spectrum symmetric_spectrum(const DenseMatrix& m);
SymmetricEigen symmetric_eigen(const DenseMatrix& m);

/// Eigenvalues of a general real square matrix (balancing, Householder
/// Hessenberg reduction, Francis double-shift QR). Order is unspecified.
std::vector<std::complex<double>> general_eigenvalues(const DenseMatrix& m);

/// Singular values, descending, by one-sided Jacobi rotations.
std::vector<double> singular_values(const DenseMatrix& m);

/// sigma_max / sigma_min. Throws Singular when sigma_min <= kRankTolerance * sigma_max.
double condition_number(const DenseMatrix& m);

/// n x p matrix whose orthonormal columns span the row space of the p x n
/// input. Throws RankDeficient when the rows are dependent.
DenseMatrix orthonormal_rowspace_basis(const DenseMatrix& a);

/// I - A^T (A A^T)^{-1} A, the orthogonal projector onto null(A). Computed
/// as I - V V^T with V from orthonormal_rowspace_basis.
DenseMatrix nullspace_projector(const DenseMatrix& a);

/// max |lambda| over all eigenvalues of a square matrix.
double spectral_radius(const DenseMatrix& m);

bool is_symmetric(const DenseMatrix& m, double tol = kSymmetryTolerance);

/// Solve R^T y = b for upper triangular R (forward substitution).
Vector solve_upper_transposed(const DenseMatrix& r, std::span<const double> b);
/// Solve R x = b for upper triangular R (back substitution).
Vector solve_upper(const DenseMatrix& r, std::span<const double> b);

/// Solution of the square system A x = b through QR. Throws Singular.
Vector solve(const DenseMatrix& a, std::span<const double> b);

}  // namespace heterosolve::numkernel
