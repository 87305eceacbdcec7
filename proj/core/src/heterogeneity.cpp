#include "heterosolve/heterogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/numkernel.hpp"

namespace heterosolve::heterogeneity {

namespace {

double angle_from_cosine(double c) { return std::acos(std::clamp(c, 0.0, 1.0)); }

// Rows scaled to unit length. Throws ZeroRow on a (near) zero row.
DenseMatrix normalized_rows(const DenseMatrix& a) {
    DenseMatrix u = a;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        auto r = u.row(i);
        const double len = norm2(r);
        if (!(len >= kZeroRowTolerance)) throw Error(ErrorCode::ZeroRow, "row " + std::to_string(i) + " is zero", i);
        for (double& x : r) x /= len;
    }
    return u;
}

// max |cos| between row i and every other row of unit-row matrix u.
double max_row_cosine(const DenseMatrix& u, std::size_t i) {
    double best = 0.0;
    for (std::size_t k = 0; k < u.rows(); ++k) {
        if (k != i) best = std::max(best, std::abs(dot(u.row(i), u.row(k))));
    }
    return best;
}

bool canonical_first(const DenseMatrix& x, const DenseMatrix& y) {
    if (x.cols() != y.cols()) return x.cols() < y.cols();
    const auto ex = x.entries();
    const auto ey = y.entries();
    return !std::lexicographical_compare(ey.begin(), ey.end(), ex.begin(), ex.end());
}

}  // namespace

double subspace_angle(const DenseMatrix& vi, const DenseMatrix& vj) {
    if (vi.rows() != vj.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "bases live in spaces of dimension " + std::to_string(vi.rows()) +
                                                      " and " + std::to_string(vj.rows()));
    }
    // Fix the argument order so that (i, j) and (j, i) run identical arithmetic.
    const bool keep = canonical_first(vi, vj);
    const DenseMatrix& x = keep ? vi : vj;
    const DenseMatrix& y = keep ? vj : vi;
    const DenseMatrix cross = x.transposed() * y;
    const auto sigma = numkernel::singular_values(cross);
    return angle_from_cosine(sigma.empty() ? 0.0 : sigma.front());
}

double cross_machine_heterogeneity(const std::vector<DenseMatrix>& bases) {
    if (bases.size() < 2) throw Error(ErrorCode::TooFewMachines, "need at least two machines");
    double theta = std::numbers::pi / 2;
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j) theta = std::min(theta, subspace_angle(bases[i], bases[j]));
    return theta;
}

double cross_machine_heterogeneity(const std::vector<MachineData>& machines) {
    std::vector<DenseMatrix> bases;
    bases.reserve(machines.size());
    for (const MachineData& md : machines) bases.push_back(md.basis);
    return cross_machine_heterogeneity(bases);
}

std::optional<double> local_heterogeneity(const DenseMatrix& a_i) {
    const DenseMatrix u = normalized_rows(a_i);
    if (u.rows() < 2) return std::nullopt;
    double best = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) best = std::max(best, max_row_cosine(u, i));
    return angle_from_cosine(best);
}

std::optional<double> local_heterogeneity(const MachineData& machine) {
    try {
        return local_heterogeneity(machine.a);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroRow) throw;
        throw Error(ErrorCode::ZeroRow, "machine " + std::to_string(machine.index) + " holds a zero row",
                    machine.index);
    }
}

Vector row_min_angles(const DenseMatrix& a) {
    const DenseMatrix u = normalized_rows(a);
    Vector out(u.rows(), std::numbers::pi / 2);
    if (u.rows() < 2) return out;
    for (std::size_t i = 0; i < u.rows(); ++i) out[i] = angle_from_cosine(max_row_cosine(u, i));
    return out;
}

Vector row_norms(const DenseMatrix& a) {
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = norm2(a.row(i));
    return out;
}

Report analyze(const LinearSystem& sys, const std::vector<MachineData>& machines) {
    const std::size_t m = machines.size();
    Report r;
    r.theta_pairwise = DenseMatrix(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            r.theta_pairwise(i, j) = r.theta_pairwise(j, i) = subspace_angle(machines[i].basis, machines[j].basis);
    if (m >= 2) {
        double theta = std::numbers::pi / 2;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) theta = std::min(theta, r.theta_pairwise(i, j));
        r.theta_h = theta;
    }
    r.phi_local.reserve(m);
    for (const MachineData& md : machines) {
        r.phi_local.push_back(local_heterogeneity(md));
        if (r.phi_local.back()) r.phi_min = std::min(r.phi_min.value_or(std::numbers::pi / 2), *r.phi_local.back());
    }
    r.theta_min_row = row_min_angles(sys.a);
    return r;
}

}  // namespace heterosolve::heterogeneity
