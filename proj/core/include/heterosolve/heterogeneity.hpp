#pragma once

#include <optional>
#include <vector>

#include "heterosolve/dense_matrix.hpp"
#include "heterosolve/system.hpp"

/// Angular heterogeneity of a partitioned system. All angles are radians in
/// [0, pi/2].
namespace heterosolve::heterogeneity {

/// Smallest principal angle between span(V_i) and span(V_j), from the largest
/// singular value of V_i^T V_j. Exactly symmetric in its arguments.
double subspace_angle(const DenseMatrix& vi, const DenseMatrix& vj);

/// min over machine pairs of subspace_angle. Throws TooFewMachines for m < 2.
double cross_machine_heterogeneity(const std::vector<MachineData>& machines);
double cross_machine_heterogeneity(const std::vector<DenseMatrix>& bases);

/// Smallest angle between two rows of `a_i`; nullopt when it has one row.
/// Throws ZeroRow.
std::optional<double> local_heterogeneity(const DenseMatrix& a_i);
std::optional<double> local_heterogeneity(const MachineData& machine);

/// Entry l: smallest angle between row l and any other row (pi/2 for a
/// single-row matrix). Throws ZeroRow.
Vector row_min_angles(const DenseMatrix& a);

/// Euclidean norm of each row.
Vector row_norms(const DenseMatrix& a);

inline constexpr double kZeroRowTolerance = 1e-14;

struct Report {
    DenseMatrix theta_pairwise;  ///< m x m, diagonal zero
    std::optional<double> theta_h;  ///< nullopt when m = 1
    std::vector<std::optional<double>> phi_local;
    std::optional<double> phi_min;  ///< nullopt when every machine has one row
    Vector theta_min_row;
};

Report analyze(const LinearSystem& sys, const std::vector<MachineData>& machines);

}  // namespace heterosolve::heterogeneity
