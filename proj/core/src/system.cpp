#include "heterosolve/system.hpp"

#include <numeric>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/numkernel.hpp"
#include "heterosolve/rng.hpp"

namespace heterosolve {

namespace {

void require_square(const DenseMatrix& a) {
    if (!a.is_square() || a.empty()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "system matrix must be square, got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

void require_invertible(const DenseMatrix& a, ErrorCode code) {
    try {
        (void)numkernel::qr_decompose(a);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RankDeficient) throw;
        throw Error(code, "matrix is numerically singular (column " + std::to_string(e.index().value_or(0)) + ")");
    }
}

}  // namespace

LinearSystem make_system(DenseMatrix a, Vector x_star) {
    require_square(a);
    if (x_star.size() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "x_star length does not match A");
    require_invertible(a, ErrorCode::SingularDraw);
    Vector b = a * x_star;
    return LinearSystem{std::move(a), std::move(b), std::move(x_star)};
}

LinearSystem make_system_from_rhs(DenseMatrix a, Vector b) {
    require_square(a);
    if (b.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "b length does not match A");
    Vector x = numkernel::solve(a, b);
    return LinearSystem{std::move(a), std::move(b), std::move(x)};
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, double mean, double stddev, std::uint64_t seed) {
    if (!(stddev > 0.0)) throw Error(ErrorCode::InvalidArgument, "stddev must be positive");
    Rng rng(seed);
    std::vector<double> entries(rows * cols);
    for (double& e : entries) e = rng.normal(mean, stddev);
    return DenseMatrix(rows, cols, std::move(entries));
}

LinearSystem generate_gaussian(std::size_t n, double mean, double stddev, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
    if (!(stddev > 0.0)) throw Error(ErrorCode::InvalidArgument, "stddev must be positive");
    Rng rng(seed);
    std::vector<double> entries(n * n);
    for (double& e : entries) e = rng.normal(mean, stddev);
    Vector x(n);
    for (double& xi : x) xi = rng.normal();
    return make_system(DenseMatrix(n, n, std::move(entries)), std::move(x));
}

Partition::Partition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)), offsets_(sizes_.size() + 1, 0) {
    std::partial_sum(sizes_.begin(), sizes_.end(), offsets_.begin() + 1);
}

Partition partition_even(std::size_t n, std::size_t m) {
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "machine count must be positive");
    if (m > n || n % m != 0) {
        throw Error(ErrorCode::NotDivisible, std::to_string(m) + " machines do not divide " + std::to_string(n) + " rows");
    }
    return Partition(std::vector<std::size_t>(m, n / m));
}

Partition partition_even(const LinearSystem& sys, std::size_t m) { return partition_even(sys.n(), m); }

Partition partition_custom(std::size_t n, const std::vector<std::size_t>& sizes) {
    if (sizes.empty()) throw Error(ErrorCode::BadSizes, "empty partition");
    std::size_t total = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw Error(ErrorCode::BadSizes, "machine " + std::to_string(i) + " has no rows", i);
        total += sizes[i];
    }
    if (total != n) {
        throw Error(ErrorCode::BadSizes, "sizes sum to " + std::to_string(total) + ", expected " + std::to_string(n));
    }
    return Partition(sizes);
}

Partition partition_custom(const LinearSystem& sys, const std::vector<std::size_t>& sizes) {
    return partition_custom(sys.n(), sizes);
}

namespace {

numkernel::QrResult factor_block(const DenseMatrix& a, const Partition& part, std::size_t i) {
    const DenseMatrix block = a.row_block(part.offset(i), part.size(i));
    try {
        return numkernel::qr_decompose(block.transposed());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RankDeficient && e.code() != ErrorCode::DimensionMismatch) throw;
        throw Error(ErrorCode::RankDeficientBlock, "machine " + std::to_string(i) + " has linearly dependent rows", i);
    }
}

void require_cover(const DenseMatrix& a, const Partition& part) {
    if (part.rows() != a.rows()) throw Error(ErrorCode::BadSizes, "partition does not cover the matrix rows");
}

}  // namespace

std::vector<DenseMatrix> local_bases(const DenseMatrix& a, const Partition& part) {
    require_cover(a, part);
    std::vector<DenseMatrix> bases;
    bases.reserve(part.machines());
    for (std::size_t i = 0; i < part.machines(); ++i) bases.push_back(factor_block(a, part, i).q);
    return bases;
}

std::vector<MachineData> build_machines(const LinearSystem& sys, const Partition& part) {
    require_cover(sys.a, part);
    const std::size_t n = sys.n();
    std::vector<MachineData> machines(part.machines());
    for (std::size_t i = 0; i < machines.size(); ++i) {
        MachineData& md = machines[i];
        numkernel::QrResult qr = factor_block(sys.a, part, i);
        md.index = i;
        md.a = sys.a.row_block(part.offset(i), part.size(i));
        md.b.assign(sys.b.begin() + static_cast<std::ptrdiff_t>(part.offset(i)),
                    sys.b.begin() + static_cast<std::ptrdiff_t>(part.offset(i) + part.size(i)));
        md.basis = std::move(qr.q);
        md.r_factor = std::move(qr.r);
        md.projector = DenseMatrix::identity(n);
        md.projector -= outer_gram(md.basis);
    }
    return machines;
}

DenseMatrix build_S(const std::vector<DenseMatrix>& bases) {
    if (bases.empty()) throw Error(ErrorCode::InvalidArgument, "no machines");
    const std::size_t n = bases.front().rows();
    DenseMatrix s(n, n);
    for (const DenseMatrix& v : bases) {
        if (v.rows() != n) throw Error(ErrorCode::DimensionMismatch, "machines disagree on n");
        s += outer_gram(v);
    }
    return s;
}

DenseMatrix build_S(const std::vector<MachineData>& machines) {
    std::vector<DenseMatrix> bases;
    bases.reserve(machines.size());
    for (const MachineData& md : machines) bases.push_back(md.basis);
    return build_S(bases);
}

DenseMatrix stacked_basis(const std::vector<MachineData>& machines) {
    if (machines.empty()) throw Error(ErrorCode::InvalidArgument, "no machines");
    const std::size_t n = machines.front().basis.rows();
    std::size_t total = 0;
    for (const MachineData& md : machines) total += md.basis.cols();
    DenseMatrix v(n, total);
    std::size_t col = 0;
    for (const MachineData& md : machines) {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < md.basis.cols(); ++c) v(r, col + c) = md.basis(r, c);
        col += md.basis.cols();
    }
    return v;
}

}  // namespace heterosolve
