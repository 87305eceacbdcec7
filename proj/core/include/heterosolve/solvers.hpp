#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "heterosolve/dense_matrix.hpp"
#include "heterosolve/numkernel.hpp"
#include "heterosolve/system.hpp"

namespace heterosolve::solvers {

enum class Method { APC, DHBM, DGD, DNAG, BCM, MLM };

inline constexpr Method kAllMethods[] = {Method::APC, Method::DHBM, Method::DGD,
                                         Method::DNAG, Method::BCM, Method::MLM};

std::string_view to_string(Method m) noexcept;
/// Case-insensitive; accepts "D-HBM" style spellings. nullopt if unknown.
std::optional<Method> parse_method(std::string_view name);

/// Projection methods keep one estimate per machine and exchange 2m messages
/// per round; gradient methods keep a central estimate and exchange m.
bool is_projection_method(Method m) noexcept;
std::size_t messages_per_round(Method m, std::size_t machines) noexcept;

// ---------------------------------------------------------------- tuning

struct ApcParams {
    double gamma = 1.0;
    double eta = 1.0;
};

struct ApcTuning {
    ApcParams params;
    double realized_radius = 0.0;  ///< spectral radius of the error iteration
    double target_rate = 0.0;      ///< 1 - 2/(sqrt(kappa(S)) + 1)
    bool refined = false;          ///< closed form missed and a search ran
};

/// Spectral radius of the APC error iteration restricted to locally
/// consistent states, from the eigenvalues of S. Each eigenvalue contributes
/// a 2x2 block; for m >= 3 the remaining modes contract by 1 - gamma.
double apc_radius(const numkernel::Spectrum& s_spectrum, std::size_t m, ApcParams p);

/// Closed-form optimum, refined by a search over gamma in [1, 2] and
/// eta in (1, 4m] when its realized radius misses the target by > 1e-3.
/// Throws BadSpectrum if lambda_min(S) <= 0, NoConvergentParams if no
/// parameters contract.
ApcTuning tune_apc(const numkernel::Spectrum& s_spectrum, std::size_t m);

struct GradientParams {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Parameters for DHBM, DGD and DNAG from the spectrum of A^T A.
/// Throws BadSpectrum when lambda_min <= 0 and InvalidArgument for other methods.
GradientParams tune_gradient(const numkernel::Spectrum& ata_spectrum, Method method);

/// Relaxation 2/(lambda_min(S) + lambda_max(S)).
double tune_bcm(const numkernel::Spectrum& s_spectrum);

/// Eigenvalues of A^T A as squared singular values of A, descending.
numkernel::Spectrum ata_spectrum(const DenseMatrix& a);

// ------------------------------------------------------------- operators

/// Linearization of one APC round on the stacked error
/// [x_1 - x*, ..., x_m - x*, xbar - x*]; dimension n(m + 1).
DenseMatrix build_apc_operator(const std::vector<MachineData>& machines, ApcParams p);

/// The same map composed with blockdiag(P_1, ..., P_m, I), which confines
/// machine errors to their local null spaces as the iteration does. Its
/// spectral radius is the asymptotic APC rate.
DenseMatrix build_apc_consistent_operator(const std::vector<MachineData>& machines, ApcParams p);

// --------------------------------------------------------------- kernels

struct ApcState {
    std::vector<Vector> local;  ///< x_i(t)
    Vector mean;                ///< xbar(t)
};

/// Minimum-norm solution of A_i x = b_i for every machine; xbar(0) is their mean.
ApcState apc_init(const std::vector<MachineData>& machines);
void apc_step(ApcState& s, const std::vector<MachineData>& machines, ApcParams p);

/// MLM reuses the per-machine layout; `mean` tracks the average of `local`.
ApcState mlm_init(const std::vector<MachineData>& machines);
void mlm_step(ApcState& s, const std::vector<MachineData>& machines);

struct CentralState {
    Vector x;
    Vector aux;  ///< DHBM: z(t); DNAG: x(t - 1); unused otherwise
};

CentralState central_init(std::size_t n);
/// sum_i A_i^T (A_i x - b_i).
Vector gradient(const std::vector<MachineData>& machines, std::span<const double> x);

void dhbm_step(CentralState& s, const std::vector<MachineData>& machines, GradientParams p);
void dgd_step(CentralState& s, const std::vector<MachineData>& machines, double alpha);
void dnag_step(CentralState& s, const std::vector<MachineData>& machines, GradientParams p);
void bcm_step(CentralState& s, const std::vector<MachineData>& machines, double mu);

// ------------------------------------------------------------------- run

struct SolverConfig {
    Method method = Method::APC;
    std::optional<double> gamma, eta;  ///< APC; nullopt = tune
    std::optional<double> alpha, beta;  ///< DHBM / DGD / DNAG
    std::optional<double> mu;           ///< BCM relaxation
    std::size_t max_iters = 10000;
    double tol = 1e-10;
    bool record_trace = true;
};

/// Throws InvalidArgument for out-of-range explicit parameters.
void validate(const SolverConfig& config);

enum class RunStatus { Converged, Stalled, Diverged };
std::string_view to_string(RunStatus s) noexcept;

inline constexpr double kDivergenceThreshold = 1e6;

struct UsedParams {
    std::optional<double> gamma, eta, alpha, beta, mu;
};

struct IterationTrace {
    Method method = Method::APC;
    RunStatus status = RunStatus::Converged;
    std::vector<double> errors;  ///< e_0 .. e_rounds (only endpoints unless record_trace)
    std::size_t rounds = 0;
    std::size_t messages_per_round = 0;
    std::size_t messages = 0;
    double final_error = 0.0;
    double fitted_rate = 0.0;
    std::size_t fit_begin = 0;  ///< iteration indices, inclusive
    std::size_t fit_end = 0;
    UsedParams params;
};

/// exp of the least-squares slope of log e_t over t in [n/2, n], ignoring
/// e_t < 100 * machine epsilon. Falls back to the whole trajectory, then to
/// the geometric mean ratio, when too few points survive.
struct RateFit {
    double rate = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
};
RateFit fit_rate(const std::vector<double>& errors);

/// Iterate until e_t <= tol, e_t > kDivergenceThreshold, or max_iters.
/// Status is reported in the trace rather than thrown.
IterationTrace run(const LinearSystem& sys, const std::vector<MachineData>& machines, const SolverConfig& config);

}  // namespace heterosolve::solvers
