#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include <heterosolve/heterogeneity.hpp>
#include <heterosolve/numkernel.hpp>
#include <heterosolve/rates_bounds.hpp>
#include <heterosolve/system.hpp>

#include "expect_error.hpp"
#include "oracle.hpp"

using namespace heterosolve;
namespace rb = heterosolve::bounds;

namespace {

constexpr double kPi = std::numbers::pi;

struct Instance {
    LinearSystem sys;
    std::vector<MachineData> machines;
    heterogeneity::Report het;
};

Instance instance(const DenseMatrix& a, const std::vector<std::size_t>& sizes) {
    LinearSystem s = make_system(a, Vector(a.cols(), 1.0));
    auto md = build_machines(s, partition_custom(s, sizes));
    auto h = heterogeneity::analyze(s, md);
    return {std::move(s), std::move(md), std::move(h)};
}

}  // namespace

// ---- closed-form rates

TEST(Rates, ApcExamples) {
    EXPECT_EQ(rates::rate_apc(1.0), 0.0);
    EXPECT_DOUBLE_EQ(rates::rate_apc(9.0), 0.5);
    EXPECT_NEAR(rates::rate_apc(5.828427124746190), std::sqrt(2.0) - 1.0, 1e-12);
}

TEST(Rates, IdentitySCase) {
    EXPECT_EQ(rates::rate_bcm(1.0), 0.0);
    for (std::size_t m : {1, 2, 5, 40}) EXPECT_DOUBLE_EQ(rates::rate_mlm(1.0, m), 1.0 - 1.0 / static_cast<double>(m));
}

TEST(Rates, GradientMethodsAtKappaOne) {
    EXPECT_EQ(rates::rate_hbm(1.0), 0.0);
    EXPECT_EQ(rates::rate_dgd(1.0), 0.0);  // 1 - 2 = -1, clamped
    EXPECT_NEAR(rates::rate_nag(1.0), 0.0, 1e-15);
}

TEST(Rates, DiagonalHeavyBall) {
    for (double a1 : {2.0, 10.0, 50.0, 1000.0}) EXPECT_NEAR(rates::rate_hbm(a1 * a1), 1.0 - 2.0 / (a1 + 1.0), 1e-12);
}

TEST(Rates, ClosedForms) {
    EXPECT_DOUBLE_EQ(rates::rate_bcm(3.0), 0.5);
    EXPECT_DOUBLE_EQ(rates::rate_dgd(4.0), 0.5);
    EXPECT_DOUBLE_EQ(rates::rate_nag(5.0), 0.5);
    EXPECT_DOUBLE_EQ(rates::rate_mlm(0.5, 2), 0.75);
}

TEST(Rates, DomainErrors) {
    EXPECT_ERROR_CODE(rates::rate_apc(0.5), BadKappa);
    EXPECT_ERROR_CODE(rates::rate_bcm(std::numeric_limits<double>::infinity()), BadKappa);
    EXPECT_ERROR_CODE(rates::rate_hbm(std::nan("")), BadKappa);
    EXPECT_ERROR_CODE(rates::rate_nag(-3.0), BadKappa);
    EXPECT_ERROR_CODE(rates::rate_dgd(0.0), BadKappa);
    EXPECT_ERROR_CODE(rates::rate_mlm(0.0, 3), BadLambda);
    EXPECT_ERROR_CODE(rates::rate_mlm(3.5, 3), BadLambda);
    EXPECT_ERROR_CODE(rates::rate_mlm(1.0, 0), BadLambda);
}

TEST(Rates, MonotoneAndBelowOne) {
    double prev[4] = {-1, -1, -1, -1};
    for (double k = 1.0; k < 1e9; k *= 1.37) {
        const double now[4] = {rates::rate_apc(k), rates::rate_bcm(k), rates::rate_hbm(k), rates::rate_nag(k)};
        for (int i = 0; i < 4; ++i) {
            EXPECT_GT(now[i], prev[i]);
            EXPECT_LT(now[i], 1.0);
            EXPECT_GE(now[i], 0.0);
            prev[i] = now[i];
        }
    }
}

TEST(Rates, FormulaOrdering) {
    for (double k = 1.0; k < 1e9; k *= 1.11) {
        EXPECT_LE(rates::rate_apc(k), rates::rate_bcm(k));
        EXPECT_LE(rates::rate_hbm(k), rates::rate_nag(k));
    }
    // NAG <= DGD only once 1 - 2/sqrt(3k+1) <= 1 - 2/k, i.e. k^2 >= 3k + 1.
    const double k0 = (3.0 + std::sqrt(13.0)) / 2.0;
    for (double k = k0; k < 1e9; k *= 1.11) EXPECT_LE(rates::rate_nag(k), rates::rate_dgd(k) + 1e-15) << k;
    EXPECT_GT(rates::rate_nag(2.0), rates::rate_dgd(2.0));
}

TEST(Rates, ReportOrderingOnRandomSystems) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const LinearSystem s = generate_gaussian(24, seed % 2 ? 1.0 : 0.0, 1.0, seed);
        const auto md = build_machines(s, partition_even(s, 4));
        const rates::RateReport r = rates::compute_rates(s, md);
        EXPECT_NEAR(r.kappa_ata, std::pow(oracle::condition(s.a), 2), 1e-6 * r.kappa_ata);
        EXPECT_NEAR(r.kappa_s, oracle::kappa_s(s.a, {6, 6, 6, 6}), 1e-8 * r.kappa_s);
        EXPECT_LE(r.rho_apc, r.rho_bcm);
        EXPECT_LE(r.rho_bcm, r.rho_mlm);
        EXPECT_LE(r.rho_hbm, r.rho_nag);
        if (r.kappa_ata >= 3.31) EXPECT_LE(r.rho_nag, r.rho_dgd);
    }
}

TEST(Rates, KappaAtaIsSquaredCondition) {
    const std::vector<double> d{50, 30, 10, 1};
    EXPECT_NEAR(rates::kappa_ata(DenseMatrix::diagonal(d)), 2500.0, 2500.0 * 1e-12);
}

// ---- kappa(S) sandwich

TEST(Thm1, Examples) {
    EXPECT_NEAR(*rb::thm1_upper_bound(2, kPi / 3), 3.0, 1e-12);
    EXPECT_NEAR(*rb::thm1_upper_bound(2, kPi / 4), 3.0 + 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_FALSE(rb::thm1_upper_bound(3, kPi / 3).has_value());
    EXPECT_FALSE(rb::thm1_upper_bound(2, 0.0).has_value());
    EXPECT_NEAR(*rb::thm1_upper_bound(5, kPi / 2), 1.0, 1e-12);
    EXPECT_ERROR_CODE(rb::thm1_upper_bound(1, kPi / 3), TooFewMachines);
}

TEST(Thm1, TightOnWorkedSystem) {
    const Instance in = instance(DenseMatrix{{1, 0}, {1, 1}}, {1, 1});
    const double kappa = oracle::kappa_s(in.sys.a, {1, 1});
    EXPECT_NEAR(kappa, 3.0 + 2.0 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(*rb::thm1_upper_bound(2, *in.het.theta_h), kappa, 1e-9);
}

TEST(Corollary, Examples) {
    EXPECT_NEAR(rb::corollary_lower_bound(kPi / 2), 1.0, 1e-15);
    EXPECT_NEAR(rb::corollary_lower_bound(kPi / 4), 2.0, 1e-12);
    EXPECT_NEAR(rb::corollary_lower_bound(kPi / 6), 4.0, 1e-12);
    EXPECT_ERROR_CODE(rb::corollary_lower_bound(0.0), DegenerateAngle);
}

TEST(Thm1, SandwichOnRandomInstances) {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        const std::size_t n = seed % 2 ? 16 : 32;
        const std::size_t m = seed % 4 < 2 ? 2 : 4;
        const DenseMatrix a = seed % 3 == 0 ? oracle::random_gaussian(n, n, seed)
                                            : oracle::near_orthogonal(n, 0.05 + 0.5 * (seed % 7) / 7.0, seed);
        LinearSystem s = make_system(a, Vector(n, 1.0));
        const auto md = build_machines(s, partition_even(s, m));
        const double theta = heterogeneity::cross_machine_heterogeneity(md);
        const auto upper = rb::thm1_upper_bound(m, theta);
        if (!upper) continue;
        const double kappa = oracle::kappa_s(a, std::vector<std::size_t>(m, n / m));
        EXPECT_LE(rb::corollary_lower_bound(theta), kappa * (1.0 + 1e-9));
        EXPECT_LE(kappa, *upper * (1.0 + 1e-9));  // tight for m = 2
        ++checked;
    }
    EXPECT_GE(checked, 60);
}

// ---- kappa(A) lower bound

TEST(Thm2, DiagonalIsTight) {
    const std::vector<double> d{50, 41, 12, 3, 1};
    const DenseMatrix a = DenseMatrix::diagonal(d);
    EXPECT_NEAR(rb::thm2_lower_bound(a, heterogeneity::row_min_angles(a)), 50.0, 1e-12);
    EXPECT_NEAR(rb::thm2_lower_bound(DenseMatrix::identity(4), heterogeneity::row_min_angles(DenseMatrix::identity(4))),
                1.0, 1e-15);
}

TEST(Thm2, WorkedSystem) {
    const DenseMatrix a{{1, 0}, {1, 1}};
    const double bound = rb::thm2_lower_bound(a, heterogeneity::row_min_angles(a));
    EXPECT_NEAR(bound, 2.0, 1e-12);
    EXPECT_LE(bound, oracle::condition(a));
}

TEST(Thm2, Errors) {
    const DenseMatrix a{{1, 0}, {2, 0}, {0, 1}};
    EXPECT_ERROR_CODE(rb::thm2_lower_bound(a, heterogeneity::row_min_angles(a)), DegenerateAngle);
    EXPECT_ERROR_CODE(rb::thm2_lower_bound(DenseMatrix{{1, 0}, {0, 0}}, Vector{1.0, 1.0}), ZeroRow);
    EXPECT_ERROR_CODE(rb::thm2_lower_bound(DenseMatrix::identity(2), Vector{1.0}), DimensionMismatch);
}

TEST(Thm2, LowerBoundsHoldOnRandomMatrices) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const DenseMatrix a = oracle::random_gaussian(16, 16, seed, seed % 2 ? 1.0 : 0.0);
        const double kappa = oracle::condition(a);
        const Vector theta = heterogeneity::row_min_angles(a);
        EXPECT_LE(rb::thm2_lower_bound(a, theta), kappa + 1e-9);
        const Instance in = instance(a, {4, 4, 4, 4});
        ASSERT_TRUE(in.het.phi_min.has_value());
        const double s = std::sin(*in.het.phi_min);
        EXPECT_LE(1.0 / (s * s), kappa * kappa * (1 + 1e-12));
        const Vector norms = heterogeneity::row_norms(a);
        const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
        EXPECT_LE((*hi / *lo) * (*hi / *lo), kappa * kappa * (1 + 1e-12));
    }
}

// ---- per-method rate bounds

TEST(Table1, TotalOrthogonality) {
    const rb::Table1 t = rb::table1_bounds(4, kPi / 2, kPi / 2, Vector(8, 1.0));
    EXPECT_NEAR(*t.apc.lower, 0.0, 1e-15);
    EXPECT_NEAR(*t.apc.upper, 0.0, 1e-15);
    EXPECT_NEAR(*t.bcm.lower, 0.0, 1e-15);
    EXPECT_NEAR(*t.bcm.upper, 0.0, 1e-15);
    EXPECT_NEAR(*t.mlm.lower, 0.0, 1e-15);
    EXPECT_NEAR(*t.mlm.upper, 0.75, 1e-15);
}

TEST(Table1, EqualNormsOrthogonalRowsGiveZeroGradientBounds) {
    const rb::Table1 t = rb::table1_bounds(2, kPi / 3, kPi / 2, Vector(6, 2.5));
    for (const auto& b : {t.dgd_norm, t.dgd_angle, t.nag_norm, t.nag_angle, t.hbm_norm, t.hbm_angle}) {
        ASSERT_TRUE(b.has_value());
        EXPECT_NEAR(*b, 0.0, 1e-15);
    }
}

TEST(Table1, WorkedApcUpper) {
    const rb::Table1 t = rb::table1_bounds(2, kPi / 4, std::nullopt, Vector{1.0, std::sqrt(2.0)});
    ASSERT_TRUE(t.apc.upper.has_value());
    EXPECT_NEAR(*t.apc.upper, std::sqrt(2.0) - 1.0, 1e-12);
    EXPECT_NEAR(*t.apc.upper, rates::rate_apc(3.0 + 2.0 * std::sqrt(2.0)), 1e-12);
    EXPECT_NEAR(*t.apc_upper_from_thm1, *t.apc.upper, 1e-12);
    EXPECT_FALSE(t.dgd_angle.has_value());
}

TEST(Table1, UpperBoundsNotApplicableOutsidePrecondition) {
    const rb::Table1 t = rb::table1_bounds(3, kPi / 3, std::nullopt, Vector{1.0});
    EXPECT_FALSE(t.apc.upper.has_value());
    EXPECT_FALSE(t.apc_upper_from_thm1.has_value());
    EXPECT_TRUE(t.apc.lower.has_value());
}

TEST(Table1, BracketsRatesOnRandomInstances) {
    int applicable = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const std::size_t m = seed % 2 ? 2 : 4;
        const DenseMatrix a = oracle::near_orthogonal(16, 0.1 + 0.6 * (seed % 5) / 5.0, seed);
        const Instance in = instance(a, std::vector<std::size_t>(m, 16 / m));
        const rates::RateReport r = rates::compute_rates(in.sys, in.machines);
        const rb::Table1 t = rb::table1_bounds(m, *in.het.theta_h, in.het.phi_min, heterogeneity::row_norms(a));
        constexpr double eps = 1e-9;
        EXPECT_LE(*t.mlm.lower, r.rho_mlm + eps);
        EXPECT_LE(*t.bcm.lower, r.rho_bcm + eps);
        EXPECT_LE(*t.apc.lower, r.rho_apc + eps);
        EXPECT_LE(*t.hbm_norm, r.rho_hbm + eps);
        EXPECT_LE(*t.hbm_angle, r.rho_hbm + eps);
        EXPECT_LE(*t.nag_norm, r.rho_nag + eps);
        EXPECT_LE(*t.nag_angle, r.rho_nag + eps);
        // The DGD entries bound the classical (k-1)/(k+1) rate, which sits
        // above the clamped 1 - 2/k closed form.
        const double classical_dgd = (r.kappa_ata - 1.0) / (r.kappa_ata + 1.0);
        EXPECT_LE(*t.dgd_norm, classical_dgd + eps);
        EXPECT_LE(*t.dgd_angle, classical_dgd + eps);
        if (t.apc_upper_from_thm1) {
            ++applicable;
            EXPECT_LE(r.rho_mlm, *t.mlm.upper + eps);
            EXPECT_LE(r.rho_bcm, *t.bcm.upper + eps);
            EXPECT_LE(r.rho_apc, *t.apc_upper_from_thm1 + eps);
            if (t.apc.upper) EXPECT_LE(*t.apc.upper, *t.apc_upper_from_thm1 + eps);
        }
    }
    EXPECT_GE(applicable, 20);
}

// ---- sufficient condition

TEST(Eq16, Examples) {
    EXPECT_TRUE(rb::eq16_sufficient_condition(2, kPi / 2, 0.1));
    EXPECT_FALSE(rb::eq16_sufficient_condition(3, kPi / 3, kPi / 2));
    EXPECT_TRUE(rb::eq16_sufficient_condition(2, kPi / 3, kPi / 4));  // 0.5 <= 0.5
    EXPECT_ERROR_CODE(rb::eq16_sufficient_condition(2, kPi / 3, std::nullopt), UndefinedPhi);
}

// ---- aggregated report

TEST(BoundReport, WorkedSystem) {
    const Instance in = instance(DenseMatrix{{1, 0}, {1, 1}}, {1, 1});
    const rb::BoundReport b = rb::compute_bounds(in.sys, in.het, 2);
    EXPECT_NEAR(*b.thm1_upper_kappa_s, 3.0 + 2.0 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(*b.corollary_lower_kappa_s, 2.0, 1e-12);
    EXPECT_NEAR(*b.thm2_lower_kappa_a, 2.0, 1e-12);
    EXPECT_FALSE(b.eq16_holds.has_value());
    EXPECT_ERROR_CODE(rb::compute_bounds(in.sys, in.het, 1), TooFewMachines);
}
