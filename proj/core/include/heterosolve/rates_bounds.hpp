#pragma once

#include <cstddef>
#include <optional>

#include "heterosolve/dense_matrix.hpp"
#include "heterosolve/heterogeneity.hpp"
#include "heterosolve/numkernel.hpp"
#include "heterosolve/system.hpp"

namespace heterosolve::rates {

// Optimal asymptotic rates. kappa arguments must be finite and >= 1
// (BadKappa otherwise).
double rate_apc(double kappa_s);
double rate_bcm(double kappa_s);
/// 1 - lambda_min(S)/m. Throws BadLambda unless 0 < lambda_min <= m.
double rate_mlm(double lambda_min_s, std::size_t m);
double rate_hbm(double kappa_ata);
double rate_nag(double kappa_ata);
/// 1 - 2/kappa, clamped below at 0.
double rate_dgd(double kappa_ata);

struct RateReport {
    double rho_apc = 0, rho_bcm = 0, rho_mlm = 0;
    double rho_hbm = 0, rho_nag = 0, rho_dgd = 0;
    double kappa_s = 0, kappa_ata = 0, lambda_min_s = 0, lambda_max_s = 0;
};

RateReport compute_rates(const numkernel::Spectrum& s_spectrum, double kappa_ata, std::size_t m);
/// Builds S and the spectrum of A^T A (through the singular values of A).
RateReport compute_rates(const LinearSystem& sys, const std::vector<MachineData>& machines);

/// kappa(A^T A) = kappa(A)^2 via singular values of A.
double kappa_ata(const DenseMatrix& a);

}  // namespace heterosolve::rates

namespace heterosolve::bounds {

/// (1 + c)/(1 - c) with c = (m - 1) cos theta_h; nullopt unless c < 1.
/// Throws TooFewMachines for m < 2.
std::optional<double> thm1_upper_bound(std::size_t m, double theta_h);

/// 1 / sin^2 theta_h. Throws DegenerateAngle when sin theta_h is zero.
double corollary_lower_bound(double theta_h);

/// max_k |a_k| / min_l (|a_l| sin theta_min^(l)), a lower bound on kappa(A).
/// Throws DegenerateAngle when some theta_min^(l) is zero, ZeroRow on a zero row.
double thm2_lower_bound(const DenseMatrix& a, const Vector& theta_min_row);

/// Closed-interval bounds on each optimal rate. nullopt marks a bound whose
/// precondition fails (or whose input angle is undefined).
struct RateBounds {
    std::optional<double> lower;
    std::optional<double> upper;
};

struct Table1 {
    RateBounds mlm, bcm, apc;
    /// Upper bound on rho_apc obtained by inserting the kappa(S) upper
    /// bound into the APC rate; nullopt unless (m - 1) cos theta_h < 1.
    std::optional<double> apc_upper_from_thm1;
    std::optional<double> dgd_norm, dgd_angle;
    std::optional<double> nag_norm, nag_angle;
    std::optional<double> hbm_norm, hbm_angle;
};

Table1 table1_bounds(std::size_t m, double theta_h, std::optional<double> phi_min, const Vector& row_norms);

/// Slack used when comparing the two sides of the sufficient condition.
inline constexpr double kEq16Slack = 1e-12;

/// (m - 1) cos theta_h <= cos^2 phi_min. Throws UndefinedPhi when phi_min is
/// nullopt.
bool eq16_sufficient_condition(std::size_t m, double theta_h, std::optional<double> phi_min);

struct BoundReport {
    std::optional<double> thm1_upper_kappa_s;
    std::optional<double> corollary_lower_kappa_s;  ///< nullopt when theta_h = 0 (bound infinite)
    std::optional<double> thm2_lower_kappa_a;       ///< nullopt when some theta_min^(l) = 0
    Table1 table1;
    std::optional<bool> eq16_holds;  ///< nullopt when phi_min is undefined
};

/// Requires m >= 2 (TooFewMachines).
BoundReport compute_bounds(const LinearSystem& sys, const heterogeneity::Report& het, std::size_t m);

}  // namespace heterosolve::bounds
