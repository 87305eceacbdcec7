#include <algorithm>
#include <cmath>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/rates_bounds.hpp"

namespace heterosolve::bounds {

std::optional<double> thm1_upper_bound(std::size_t m, double theta_h) {
    if (m < 2) throw Error(ErrorCode::TooFewMachines, "bound needs at least two machines");
    const double c = static_cast<double>(m - 1) * std::cos(theta_h);
    if (!(c < 1.0)) return std::nullopt;
    return (1.0 + c) / (1.0 - c);
}

double corollary_lower_bound(double theta_h) {
    const double s = std::sin(theta_h);
    if (s == 0.0) throw Error(ErrorCode::DegenerateAngle, "theta_H = 0: kappa(S) bound is infinite");
    return 1.0 / (s * s);
}

double thm2_lower_bound(const DenseMatrix& a, const Vector& theta_min_row) {
    if (theta_min_row.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "one angle per row expected");
    const Vector norms = heterogeneity::row_norms(a);
    double top = 0.0;
    double bottom = HUGE_VAL;
    for (std::size_t l = 0; l < norms.size(); ++l) {
        if (!(norms[l] >= heterogeneity::kZeroRowTolerance)) {
            throw Error(ErrorCode::ZeroRow, "row " + std::to_string(l) + " is zero", l);
        }
        const double s = std::sin(theta_min_row[l]);
        if (s == 0.0) {
            throw Error(ErrorCode::DegenerateAngle, "row " + std::to_string(l) + " is parallel to another row", l);
        }
        top = std::max(top, norms[l]);
        bottom = std::min(bottom, norms[l] * s);
    }
    return top / bottom;
}

Table1 table1_bounds(std::size_t m, double theta_h, std::optional<double> phi_min, const Vector& row_norms) {
    if (m < 2) throw Error(ErrorCode::TooFewMachines, "table bounds need at least two machines");
    const double md = static_cast<double>(m);
    const double sin_h = std::sin(theta_h);
    const double cos_h = std::cos(theta_h);
    const double c = (md - 1.0) * cos_h;

    Table1 t;
    t.mlm = {1.0 - sin_h * sin_h, (1.0 - 1.0 / md) * (1.0 + cos_h)};
    t.bcm = {2.0 / (1.0 + sin_h * sin_h) - 1.0, c};
    t.apc.lower = 2.0 / (1.0 + sin_h) - 1.0;
    const double radicand = 1.0 - (md - 1.0) * cos_h * cos_h;
    if (radicand >= 0.0 && c < 1.0) t.apc.upper = c / (1.0 + std::sqrt(radicand));
    if (c < 1.0) t.apc_upper_from_thm1 = c / (1.0 + std::sqrt(1.0 - c * c));

    if (!row_norms.empty()) {
        const auto [lo, hi] = std::minmax_element(row_norms.begin(), row_norms.end());
        const double mx = *hi;
        const double mn = *lo;
        if (mn > 0.0) {
            t.dgd_norm = (mx * mx - mn * mn) / (mx * mx + mn * mn);
            t.nag_norm = 1.0 - 2.0 / std::sqrt(3.0 * mx / mn + 1.0);
            t.hbm_norm = (mx - mn) / (mx + mn);
        }
    }
    if (phi_min) {
        const double s = std::sin(*phi_min);
        t.dgd_angle = 2.0 / (1.0 + s * s) - 1.0;
        t.nag_angle = 1.0 - 2.0 * s / std::sqrt(3.0 + s * s);
        t.hbm_angle = 2.0 / (1.0 + s) - 1.0;
    }
    return t;
}

bool eq16_sufficient_condition(std::size_t m, double theta_h, std::optional<double> phi_min) {
    if (!phi_min) throw Error(ErrorCode::UndefinedPhi, "phi_min is undefined (every machine holds one row)");
    if (m < 1) throw Error(ErrorCode::TooFewMachines, "no machines");
    const double lhs = static_cast<double>(m - 1) * std::cos(theta_h);
    const double cphi = std::cos(*phi_min);
    return lhs <= cphi * cphi + kEq16Slack;
}

BoundReport compute_bounds(const LinearSystem& sys, const heterogeneity::Report& het, std::size_t m) {
    if (m < 2 || !het.theta_h) throw Error(ErrorCode::TooFewMachines, "bounds need at least two machines");
    const double theta_h = *het.theta_h;
    BoundReport r;
    r.thm1_upper_kappa_s = thm1_upper_bound(m, theta_h);
    if (std::sin(theta_h) != 0.0) r.corollary_lower_kappa_s = corollary_lower_bound(theta_h);
    const bool degenerate_row = std::any_of(het.theta_min_row.begin(), het.theta_min_row.end(),
                                            [](double t) { return std::sin(t) == 0.0; });
    if (!degenerate_row) r.thm2_lower_kappa_a = thm2_lower_bound(sys.a, het.theta_min_row);
    r.table1 = table1_bounds(m, theta_h, het.phi_min, heterogeneity::row_norms(sys.a));
    if (het.phi_min) r.eq16_holds = eq16_sufficient_condition(m, theta_h, het.phi_min);
    return r;
}

}  // namespace heterosolve::bounds
