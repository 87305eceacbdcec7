#include <string>

#include "heterosolve/errors.hpp"
#include "heterosolve/solvers.hpp"

namespace heterosolve::solvers {

namespace {

std::size_t dimension(const std::vector<MachineData>& machines) {
    if (machines.empty()) throw Error(ErrorCode::InvalidArgument, "no machines");
    return machines.front().a.cols();
}

// d - V (V^T d): the projection onto null(A_i) through the p_i-column basis.
void project_null(const DenseMatrix& v, std::span<double> d) {
    const Vector coeff = transpose_times(v, d);
    for (std::size_t r = 0; r < v.rows(); ++r) d[r] -= dot(v.row(r), coeff);
}

Vector min_norm_solution(const MachineData& md) {
    const Vector y = numkernel::solve_upper_transposed(md.r_factor, md.b);
    return md.basis * y;
}

Vector average(const std::vector<Vector>& xs) {
    Vector mean(xs.front().size(), 0.0);
    for (const Vector& x : xs) axpy(1.0, x, mean);
    const double inv = 1.0 / static_cast<double>(xs.size());
    for (double& v : mean) v *= inv;
    return mean;
}

}  // namespace

ApcState apc_init(const std::vector<MachineData>& machines) {
    dimension(machines);
    ApcState s;
    s.local.reserve(machines.size());
    for (const MachineData& md : machines) s.local.push_back(min_norm_solution(md));
    s.mean = average(s.local);
    return s;
}

void apc_step(ApcState& s, const std::vector<MachineData>& machines, ApcParams p) {
    const std::size_t n = s.mean.size();
    const double m = static_cast<double>(machines.size());
    Vector next_mean(n, 0.0);
    Vector d(n);
    for (std::size_t i = 0; i < machines.size(); ++i) {
        Vector& xi = s.local[i];
        for (std::size_t k = 0; k < n; ++k) d[k] = s.mean[k] - xi[k];
        project_null(machines[i].basis, d);
        axpy(p.gamma, d, xi);
        axpy(p.eta / m, xi, next_mean);
    }
    axpy(1.0 - p.eta, s.mean, next_mean);
    s.mean = std::move(next_mean);
}

ApcState mlm_init(const std::vector<MachineData>& machines) { return apc_init(machines); }

void mlm_step(ApcState& s, const std::vector<MachineData>& machines) {
    const std::size_t n = s.mean.size();
    Vector d(n);
    for (std::size_t i = 0; i < machines.size(); ++i) {
        Vector& xi = s.local[i];
        for (std::size_t k = 0; k < n; ++k) d[k] = s.mean[k] - xi[k];
        project_null(machines[i].basis, d);
        axpy(1.0, d, xi);
    }
    s.mean = average(s.local);
}

CentralState central_init(std::size_t n) { return CentralState{Vector(n, 0.0), Vector(n, 0.0)}; }

Vector gradient(const std::vector<MachineData>& machines, std::span<const double> x) {
    Vector g(x.size(), 0.0);
    for (const MachineData& md : machines) {
        Vector residual = md.a * x;
        for (std::size_t k = 0; k < residual.size(); ++k) residual[k] -= md.b[k];
        // g += A_i^T r
        for (std::size_t r = 0; r < md.a.rows(); ++r) axpy(residual[r], md.a.row(r), g);
    }
    return g;
}

void dhbm_step(CentralState& s, const std::vector<MachineData>& machines, GradientParams p) {
    const Vector g = gradient(machines, s.x);
    for (std::size_t k = 0; k < s.x.size(); ++k) {
        s.aux[k] = p.beta * s.aux[k] + g[k];
        s.x[k] -= p.alpha * s.aux[k];
    }
}

void dgd_step(CentralState& s, const std::vector<MachineData>& machines, double alpha) {
    axpy(-alpha, gradient(machines, s.x), s.x);
}

void dnag_step(CentralState& s, const std::vector<MachineData>& machines, GradientParams p) {
    const std::size_t n = s.x.size();
    Vector y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = s.x[k] + p.beta * (s.x[k] - s.aux[k]);
    const Vector g = gradient(machines, y);
    s.aux = s.x;
    for (std::size_t k = 0; k < n; ++k) s.x[k] = y[k] - p.alpha * g[k];
}

void bcm_step(CentralState& s, const std::vector<MachineData>& machines, double mu) {
    Vector correction(s.x.size(), 0.0);
    for (const MachineData& md : machines) {
        // A_i^T (A_i A_i^T)^{-1} r = V_i R_i^{-T} r
        Vector residual = md.a * s.x;
        for (std::size_t k = 0; k < residual.size(); ++k) residual[k] = md.b[k] - residual[k];
        const Vector y = numkernel::solve_upper_transposed(md.r_factor, residual);
        for (std::size_t r = 0; r < md.basis.rows(); ++r) correction[r] += dot(md.basis.row(r), y);
    }
    axpy(mu, correction, s.x);
}

DenseMatrix build_apc_operator(const std::vector<MachineData>& machines, ApcParams p) {
    const std::size_t n = dimension(machines);
    const std::size_t m = machines.size();
    const double md = static_cast<double>(m);
    DenseMatrix op(n * (m + 1), n * (m + 1));
    const std::size_t bar = n * m;  // first row/column of the mean block

    // Mean block: (eta*gamma/m) sum_i P_i + (1 - eta) I
    for (std::size_t r = 0; r < n; ++r) op(bar + r, bar + r) = 1.0 - p.eta;
    for (std::size_t i = 0; i < m; ++i) {
        const DenseMatrix& pi = machines[i].projector;
        const std::size_t off = i * n;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const double id = r == c ? 1.0 : 0.0;
                const double local = id - p.gamma * pi(r, c);
                op(off + r, off + c) = local;             // (I - gamma P_i)
                op(off + r, bar + c) = p.gamma * pi(r, c);  // gamma P_i
                op(bar + r, off + c) = p.eta / md * local;
                op(bar + r, bar + c) += p.eta * p.gamma / md * pi(r, c);
            }
        }
    }
    return op;
}

DenseMatrix build_apc_consistent_operator(const std::vector<MachineData>& machines, ApcParams p) {
    DenseMatrix op = build_apc_operator(machines, p);
    const std::size_t n = dimension(machines);
    const std::size_t dim = op.rows();
    // Right-multiply the machine column blocks by P_i.
    for (std::size_t i = 0; i < machines.size(); ++i) {
        const DenseMatrix& pi = machines[i].projector;
        const std::size_t off = i * n;
        Vector row(n);
        for (std::size_t r = 0; r < dim; ++r) {
            auto full = op.row(r);
            for (std::size_t c = 0; c < n; ++c) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) acc += full[off + k] * pi(k, c);
                row[c] = acc;
            }
            for (std::size_t c = 0; c < n; ++c) full[off + c] = row[c];
        }
    }
    return op;
}

}  // namespace heterosolve::solvers
