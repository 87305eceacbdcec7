#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

/// Monte-Carlo sweeps over random Gaussian systems. Trials run in parallel;
/// every trial owns its random stream and its output slot, and cells are
/// reduced in trial order, so results do not depend on the job count.
namespace heterosolve::montecarlo {

struct ExperimentConfig {
    std::size_t n = 120;                ///< exp1 system size
    std::vector<std::size_t> m_list;    ///< exp1: divisors of n >= 2; exp2: {10, 20}
    std::vector<std::size_t> n_list;    ///< exp2: multiples of m from 2m to 200; exp3: 2..200
    std::vector<double> means{0.0, 1.0};  ///< exp1 entry means; exp2 uses means.front()
    double stddev = 1.0;
    std::size_t trials = 300;
    double kappa_reject = 1e7;          ///< reject draws with kappa(A^T A) above this
    std::uint64_t master_seed = 0;
    std::size_t jobs = 1;
};

/// Defaults for each experiment as run in the reference study.
ExperimentConfig default_config(int experiment);

struct Summary {
    double mean = 0.0;
    double se = 0.0;  ///< sample standard deviation / sqrt(T); 0 when T = 1
};

Summary summarize(const std::vector<double>& values);

/// One (series, x) cell of experiments 1 and 2.
struct RateCell {
    double mu = 0.0;     ///< exp1: entry mean
    std::size_t m = 0;
    std::size_t n = 0;
    Summary rho_apc;
    Summary rho_hbm;
    std::size_t trials = 0;
    std::size_t rejections = 0;
};

struct CosineCell {
    std::size_t n = 0;
    Summary c;
    std::size_t trials = 0;
};

/// Rows ordered by (mu, m). Throws ExcessiveRejection when a cell needs more
/// than 100 T draws, NotDivisible when some m does not divide n.
std::vector<RateCell> experiment1(const ExperimentConfig& config);
/// Rows ordered by (m, n).
std::vector<RateCell> experiment2(const ExperimentConfig& config);
std::vector<CosineCell> experiment3(const ExperimentConfig& config);

/// Largest |<v_i, v_j>| over i < j after normalizing the rows of an n x n
/// standard Gaussian draw.
double max_cosine(std::size_t n, std::uint64_t seed);

// Fixed-header CSV renderings, 17 significant digits.
std::string exp1_csv(const std::vector<RateCell>& rows);
std::string exp2_csv(const std::vector<RateCell>& rows);
std::string exp3_csv(const std::vector<CosineCell>& rows);

inline constexpr const char* kExp1Header = "mu,m,rho_apc_mean,rho_apc_se,rho_hbm_mean,rho_hbm_se,rejections";
inline constexpr const char* kExp2Header = "m,n,rho_apc_mean,rho_apc_se,rho_hbm_mean,rho_hbm_se,rejections";
inline constexpr const char* kExp3Header = "n,c_mean,c_se";

}  // namespace heterosolve::montecarlo
