#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heterosolve/dense_matrix.hpp"

namespace heterosolve {

/// Square invertible system A x = b with its known solution.
struct LinearSystem {
    DenseMatrix a;
    Vector b;
    Vector x_star;

    [[nodiscard]] std::size_t n() const noexcept { return a.rows(); }
};

/// b := A x_star. Throws DimensionMismatch / SingularDraw.
LinearSystem make_system(DenseMatrix a, Vector x_star);
/// x_star := A^{-1} b. Throws Singular.
LinearSystem make_system_from_rhs(DenseMatrix a, Vector b);

/// Entries of A i.i.d. N(mean, stddev^2), then x_star i.i.d. N(0, 1), both
/// drawn from one engine seeded with `seed`. Throws SingularDraw when A is
/// numerically singular.
LinearSystem generate_gaussian(std::size_t n, double mean, double stddev, std::uint64_t seed);

/// Draw of an n x n Gaussian matrix alone (no invertibility check).
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, double mean, double stddev, std::uint64_t seed);

/// Contiguous row blocks: machine i owns rows [offset(i), offset(i) + sizes[i]).
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::size_t> sizes);

    [[nodiscard]] std::size_t machines() const noexcept { return sizes_.size(); }
    [[nodiscard]] std::size_t rows() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }
    [[nodiscard]] const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    [[nodiscard]] std::size_t size(std::size_t i) const { return sizes_.at(i); }
    [[nodiscard]] std::size_t offset(std::size_t i) const { return offsets_.at(i); }

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;  // prefix sums, length m + 1
};

/// n/m rows each. Throws NotDivisible, or InvalidArgument for m = 0.
Partition partition_even(std::size_t n, std::size_t m);
Partition partition_even(const LinearSystem& sys, std::size_t m);
/// Throws BadSizes when a size is zero or the sizes do not sum to n.
Partition partition_custom(std::size_t n, const std::vector<std::size_t>& sizes);
Partition partition_custom(const LinearSystem& sys, const std::vector<std::size_t>& sizes);

struct MachineData {
    std::size_t index = 0;
    DenseMatrix a;          ///< p_i x n
    Vector b;               ///< p_i
    DenseMatrix basis;      ///< n x p_i, orthonormal basis of the row space
    DenseMatrix r_factor;   ///< p_i x p_i upper triangular, A_i^T = basis * r_factor
    DenseMatrix projector;  ///< n x n projector onto null(A_i)
};

/// Throws RankDeficientBlock carrying the machine index.
std::vector<MachineData> build_machines(const LinearSystem& sys, const Partition& part);

/// Row-space bases only; cheaper when projectors are not needed.
std::vector<DenseMatrix> local_bases(const DenseMatrix& a, const Partition& part);

/// S = sum_i V_i V_i^T (= sum_i (I - P_i)).
DenseMatrix build_S(const std::vector<MachineData>& machines);
DenseMatrix build_S(const std::vector<DenseMatrix>& bases);

/// [V_1 ... V_m], n x n when the blocks cover a square system.
DenseMatrix stacked_basis(const std::vector<MachineData>& machines);

}  // namespace heterosolve
