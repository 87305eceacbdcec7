#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace heterosolve {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles.
///
/// Sized for the problems this library targets (n up to a few hundred), so
/// every operation is a straightforward loop nest over contiguous storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Takes ownership of `entries` (row-major). Throws DimensionMismatch when
    /// the size disagrees with rows*cols.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> diag);
    static DenseMatrix column(std::span<const double> v);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] Vector column_copy(std::size_t j) const;

    [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }
    [[nodiscard]] double* data() noexcept { return data_.data(); }
    [[nodiscard]] const double* data() const noexcept { return data_.data(); }

    [[nodiscard]] DenseMatrix transposed() const;
    /// Rows [first, first+count) as a new matrix.
    [[nodiscard]] DenseMatrix row_block(std::size_t first, std::size_t count) const;

    [[nodiscard]] bool all_finite() const noexcept;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s) noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

/// y = A^T x without forming the transpose.
Vector transpose_times(const DenseMatrix& a, std::span<const double> x);
/// A^T A.
DenseMatrix gram(const DenseMatrix& a);
/// A A^T.
DenseMatrix outer_gram(const DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a) noexcept;
double max_abs(const DenseMatrix& a) noexcept;
/// max_ij |a_ij - a_ji| for square a.
double asymmetry(const DenseMatrix& a);

// Vector helpers.
double dot(std::span<const double> x, std::span<const double> y) noexcept;
double norm2(std::span<const double> x) noexcept;
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;
Vector subtract(std::span<const double> x, std::span<const double> y);

}  // namespace heterosolve
