#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include <heterosolve/matrix_io.hpp>
#include <heterosolve/numkernel.hpp>
#include <heterosolve/system.hpp>

#include "expect_error.hpp"
#include "oracle.hpp"

using namespace heterosolve;

namespace {

double residual_ratio(const LinearSystem& s) {
    const Vector ax = s.a * s.x_star;
    return norm2(subtract(ax, s.b)) / norm2(s.b);
}

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), a.rows() * a.cols() * sizeof(double)) == 0;
}

}  // namespace

TEST(GenerateGaussian, ConsistentSystemAtExperimentSize) {
    const LinearSystem s = generate_gaussian(120, 0.0, 1.0, 7);
    EXPECT_EQ(s.n(), 120u);
    EXPECT_LE(residual_ratio(s), 1e-10);
}

TEST(GenerateGaussian, ScalarSystemExact) {
    const LinearSystem s = generate_gaussian(1, 0.0, 1.0, 3);
    ASSERT_EQ(s.n(), 1u);
    EXPECT_EQ(s.b[0], s.a(0, 0) * s.x_star[0]);
    EXPECT_DOUBLE_EQ(s.b[0] / s.a(0, 0), s.x_star[0]);
}

TEST(GenerateGaussian, SameSeedBitwiseIdentical) {
    const LinearSystem s1 = generate_gaussian(30, 1.0, 1.0, 42);
    const LinearSystem s2 = generate_gaussian(30, 1.0, 1.0, 42);
    EXPECT_TRUE(bitwise_equal(s1.a, s2.a));
    EXPECT_EQ(s1.x_star, s2.x_star);
    const LinearSystem s3 = generate_gaussian(30, 1.0, 1.0, 43);
    EXPECT_FALSE(bitwise_equal(s1.a, s3.a));
}

TEST(GenerateGaussian, MomentsRoughlyRight) {
    const LinearSystem s = generate_gaussian(100, 1.0, 2.0, 5);
    double sum = 0, sq = 0;
    for (double v : s.a.entries()) {
        sum += v;
        sq += v * v;
    }
    const double cnt = 10000.0;
    const double mean = sum / cnt;
    EXPECT_NEAR(mean, 1.0, 0.1);
    EXPECT_NEAR(std::sqrt(sq / cnt - mean * mean), 2.0, 0.1);
}

TEST(GenerateGaussian, BadArguments) {
    EXPECT_ERROR_CODE(generate_gaussian(0, 0.0, 1.0, 1), InvalidArgument);
    EXPECT_ERROR_CODE(generate_gaussian(4, 0.0, 0.0, 1), InvalidArgument);
}

TEST(MakeSystem, SingularMatrixFlagged) {
    EXPECT_ERROR_CODE(make_system(DenseMatrix{{1, 2}, {2, 4}}, Vector{1, 1}), SingularDraw);
    EXPECT_ERROR_CODE(make_system_from_rhs(DenseMatrix{{1, 2}, {2, 4}}, Vector{1, 1}), Singular);
}

TEST(MakeSystem, FromRhsRecoversSolution) {
    const LinearSystem s = make_system_from_rhs(DenseMatrix{{2, 1}, {1, 3}}, Vector{3, 5});
    EXPECT_NEAR(s.x_star[0], 0.8, 1e-14);
    EXPECT_NEAR(s.x_star[1], 1.4, 1e-14);
}

TEST(PartitionEven, ExperimentSplit) {
    const Partition p = partition_even(120, 10);
    EXPECT_EQ(p.machines(), 10u);
    for (std::size_t s : p.sizes()) EXPECT_EQ(s, 12u);
    EXPECT_EQ(p.offset(3), 36u);
    EXPECT_EQ(p.rows(), 120u);
}

TEST(PartitionEven, OneRowEach) {
    const Partition p = partition_even(120, 120);
    for (std::size_t s : p.sizes()) EXPECT_EQ(s, 1u);
}

TEST(PartitionEven, Errors) {
    EXPECT_ERROR_CODE(partition_even(120, 7), NotDivisible);
    EXPECT_ERROR_CODE(partition_even(4, 8), NotDivisible);
    EXPECT_ERROR_CODE(partition_even(4, 0), InvalidArgument);
}

TEST(PartitionCustom, ValidAndInvalid) {
    const Partition p = partition_custom(3, {1, 2});
    EXPECT_EQ(p.machines(), 2u);
    EXPECT_EQ(p.offset(1), 1u);
    EXPECT_EQ(partition_custom(4, {1, 1, 2}).machines(), 3u);
    EXPECT_ERROR_CODE(partition_custom(3, {2, 2}), BadSizes);
    EXPECT_ERROR_CODE(partition_custom(3, {0, 3}), BadSizes);
    EXPECT_ERROR_CODE(partition_custom(3, {}), BadSizes);
}

TEST(BuildMachines, DiagonalTwoByTwo) {
    const LinearSystem s = make_system(DenseMatrix{{1, 0}, {0, 2}}, Vector{1, 1});
    const auto md = build_machines(s, partition_custom(s, {1, 1}));
    ASSERT_EQ(md.size(), 2u);
    EXPECT_EQ(md[0].a, (DenseMatrix{{1, 0}}));
    EXPECT_NEAR(md[0].projector(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(md[0].projector(1, 1), 1.0, 1e-15);
    EXPECT_NEAR(md[0].projector(0, 1), 0.0, 1e-15);
}

TEST(BuildMachines, SingleMachineHasZeroProjector) {
    const LinearSystem s = generate_gaussian(6, 0.0, 1.0, 11);
    const auto md = build_machines(s, partition_even(s, 1));
    ASSERT_EQ(md.size(), 1u);
    EXPECT_LE(max_abs(md[0].projector), 1e-12);
}

TEST(BuildMachines, WorkedSystemSecondProjector) {
    const LinearSystem s = make_system(DenseMatrix{{1, 0}, {1, 1}}, Vector{1, 1});
    const auto md = build_machines(s, partition_custom(s, {1, 1}));
    const DenseMatrix& p = md[1].projector;
    EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(p(0, 1), -0.5, 1e-15);
    EXPECT_NEAR(p(1, 0), -0.5, 1e-15);
    EXPECT_NEAR(p(1, 1), 0.5, 1e-15);
}

TEST(BuildMachines, RankDeficientBlockCarriesIndex) {
    // Block 1 holds two parallel rows; A itself is singular so go through the bases.
    const DenseMatrix a{{1, 0, 0}, {0, 1, 1}, {0, 2, 2}};
    try {
        (void)local_bases(a, partition_custom(3, {1, 2}));
        ADD_FAILURE() << "expected RankDeficientBlock";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficientBlock);
        ASSERT_TRUE(e.index().has_value());
        EXPECT_EQ(*e.index(), 1u);
        EXPECT_NE(std::string(e.what()).find("machine 1"), std::string::npos);
    }
}

TEST(BuildMachines, ConcatenationReproducesSystemBitExactly) {
    const LinearSystem s = generate_gaussian(24, 1.0, 1.0, 8);
    const auto md = build_machines(s, partition_custom(s, {5, 7, 3, 9}));
    std::size_t row = 0;
    for (const MachineData& m : md) {
        for (std::size_t r = 0; r < m.a.rows(); ++r, ++row) {
            EXPECT_EQ(std::memcmp(m.a.row(r).data(), s.a.row(row).data(), s.n() * sizeof(double)), 0);
            EXPECT_EQ(m.b[r], s.b[row]);
        }
    }
    EXPECT_EQ(row, s.n());
}

TEST(BuildMachines, MachineInvariants) {
    const LinearSystem s = generate_gaussian(20, 0.0, 1.0, 21);
    for (const MachineData& m : build_machines(s, partition_even(s, 4))) {
        EXPECT_LE(max_abs(m.a * m.projector), 1e-10 * max_abs(m.a));
        EXPECT_TRUE(numkernel::is_symmetric(m.projector, 1e-12));
        const DenseMatrix pp = m.projector * m.projector;
        EXPECT_LE(max_abs(pp - m.projector), 1e-10);
        // A_i^T = basis * r_factor
        EXPECT_LE(max_abs(m.basis * m.r_factor - m.a.transposed()), 1e-12 * max_abs(m.a));
    }
}

TEST(BuildS, TotalOrthogonalityGivesIdentity) {
    const std::vector<double> d{5, 4, 3, 2, 1, 0.5};
    const LinearSystem s = make_system(DenseMatrix::diagonal(d), Vector(6, 1.0));
    for (std::size_t m : {1, 2, 3, 6}) {
        const DenseMatrix sm = build_S(build_machines(s, partition_even(s, m)));
        EXPECT_LE(max_abs(sm - DenseMatrix::identity(6)), 1e-15);
    }
    const DenseMatrix sc = build_S(build_machines(s, partition_custom(s, {1, 4, 1})));
    EXPECT_LE(max_abs(sc - DenseMatrix::identity(6)), 1e-15);
}

TEST(BuildS, SingleInvertibleBlockIsIdentity) {
    const LinearSystem s = generate_gaussian(7, 0.0, 1.0, 4);
    EXPECT_LE(max_abs(build_S(build_machines(s, partition_even(s, 1))) - DenseMatrix::identity(7)), 1e-12);
}

TEST(BuildS, WorkedSystem) {
    const LinearSystem s = make_system(DenseMatrix{{1, 0}, {1, 1}}, Vector{1, 1});
    const DenseMatrix sm = build_S(build_machines(s, partition_custom(s, {1, 1})));
    EXPECT_LE(max_abs(sm - DenseMatrix{{1.5, 0.5}, {0.5, 0.5}}), 1e-15);
}

TEST(BuildS, StackedBasisAndOracleAgree) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const LinearSystem s = generate_gaussian(12, 1.0, 1.0, seed);
        const std::vector<std::size_t> sizes{3, 2, 4, 3};
        const auto md = build_machines(s, partition_custom(s, sizes));
        const DenseMatrix sm = build_S(md);
        const DenseMatrix v = stacked_basis(md);
        EXPECT_LE(max_abs(sm - v * v.transposed()), 1e-9);
        EXPECT_LE((oracle::to_eigen(sm) - oracle::s_matrix(s.a, sizes)).cwiseAbs().maxCoeff(), 1e-9);
        const auto spec = numkernel::symmetric_spectrum(sm);
        EXPECT_GT(spec.min(), 0.0);
        EXPECT_LE(spec.max(), 4.0 + 1e-12);
    }
}

TEST(MatrixIo, RoundTripIsBitExact) {
    DenseMatrix m = oracle::random_gaussian(7, 5, 3);
    m(0, 0) = 0.1;
    m(1, 1) = -1e-300;
    m(2, 2) = 1.0 / 3.0;
    m(3, 3) = 6.02214076e23;
    const DenseMatrix back = io::parse_matrix(io::format_matrix(m));
    EXPECT_TRUE(bitwise_equal(m, back));

    const auto path = std::filesystem::temp_directory_path() / "heterosolve_io_roundtrip.txt";
    io::write_matrix(path, m);
    EXPECT_TRUE(bitwise_equal(io::read_matrix(path), m));
    const Vector v{0.1, -2.5e-7, 1e308};
    io::write_vector(path, v);
    EXPECT_EQ(io::read_vector(path), v);
    std::filesystem::remove(path);
}

TEST(MatrixIo, HeaderFormat) {
    const std::string text = io::format_matrix(DenseMatrix{{1, 2}, {3, 4}});
    EXPECT_EQ(text.substr(0, text.find('\n')), "2 2");
}

TEST(MatrixIo, ParseErrors) {
    EXPECT_ERROR_CODE(io::parse_matrix("2 2\n1 2\n3"), Parse);
    EXPECT_ERROR_CODE(io::parse_matrix("2 2\n1 2\n3 x"), Parse);
    EXPECT_ERROR_CODE(io::parse_matrix("2 2\n1 2\n3 4 5"), Parse);
    EXPECT_ERROR_CODE(io::parse_matrix("two 2\n"), Parse);
    EXPECT_ERROR_CODE(io::parse_matrix("0 2\n"), Parse);
    EXPECT_ERROR_CODE(io::read_matrix("/nonexistent/heterosolve/matrix.txt"), Parse);
}

TEST(MatrixIo, ParseErrorNamesLine) {
    try {
        (void)io::parse_matrix("2 2\n1 2\n3 bad\n");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}
