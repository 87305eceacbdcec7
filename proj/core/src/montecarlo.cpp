#include "heterosolve/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "heterosolve/errors.hpp"
#include "heterosolve/matrix_io.hpp"
#include "heterosolve/numkernel.hpp"
#include "heterosolve/rates_bounds.hpp"
#include "heterosolve/rng.hpp"
#include "heterosolve/system.hpp"

namespace heterosolve::montecarlo {

namespace {

// Salt layout: experiment id | cell | draw attempt.
std::uint64_t salt(std::uint64_t experiment, std::uint64_t cell, std::uint64_t attempt) {
    return (experiment << 56) ^ (cell << 32) ^ attempt;
}

// Runs body(k) for k in [0, count) on up to `jobs` threads. The first
// exception (lowest index not guaranteed) is rethrown after all threads join.
template <typename F>
void parallel_for(std::size_t count, std::size_t jobs, F body) {
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
    if (jobs == 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                body(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs - 1);
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::size_t> divisors_from_two(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t d = 2; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

// kappa(A^T A) from the symmetric eigensolve of the Gram matrix: about 20x
// cheaper than Jacobi SVD at n = 200, and accurate to ~n eps kappa relative,
// far below the sampling noise of any cell.
std::optional<double> kappa_ata_or_reject(const DenseMatrix& a, double threshold) {
    const double k = numkernel::symmetric_spectrum(gram(a)).condition();
    if (!(k <= threshold)) return std::nullopt;
    return k;
}

// rho_APC for the even m-way split of a; nullopt when a block is rank deficient.
std::optional<double> apc_rate_for(const DenseMatrix& a, std::size_t m) {
    try {
        const auto bases = local_bases(a, partition_even(a.rows(), m));
        return rates::rate_apc(numkernel::symmetric_spectrum(build_S(bases)).condition());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RankDeficientBlock || e.code() == ErrorCode::BadKappa) return std::nullopt;
        throw;
    }
}

struct TrialOutcome {
    std::vector<double> rho_apc;  // one per m
    double rho_hbm = 0.0;
    std::size_t rejections = 0;
};

// Draws until a matrix passes every check, then evaluates the rates for
// each machine count in `ms`.
TrialOutcome accepted_trial(std::size_t n, double mean, const ExperimentConfig& cfg, const std::vector<std::size_t>& ms,
                            std::uint64_t experiment, std::uint64_t cell, std::size_t trial) {
    TrialOutcome out;
    const std::size_t max_attempts = 100 * std::max<std::size_t>(cfg.trials, 1);
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (out.rejections >= max_attempts) {
            throw Error(ErrorCode::ExcessiveRejection,
                        "trial " + std::to_string(trial) + " rejected " + std::to_string(out.rejections) + " draws");
        }
        const std::uint64_t seed = stream_seed(cfg.master_seed, trial, salt(experiment, cell, attempt));
        const DenseMatrix a = gaussian_matrix(n, n, mean, cfg.stddev, seed);
        const auto k = kappa_ata_or_reject(a, cfg.kappa_reject);
        if (!k) {
            ++out.rejections;
            continue;
        }
        out.rho_apc.clear();
        bool ok = true;
        for (std::size_t m : ms) {
            const auto r = apc_rate_for(a, m);
            if (!r) {
                ok = false;
                break;
            }
            out.rho_apc.push_back(*r);
        }
        if (!ok) {
            ++out.rejections;
            continue;
        }
        out.rho_hbm = rates::rate_hbm(*k);
        return out;
    }
}

void check_rejections(std::size_t total, std::size_t trials) {
    if (total > 100 * trials) {
        throw Error(ErrorCode::ExcessiveRejection,
                    std::to_string(total) + " rejected draws exceed 100 x " + std::to_string(trials) + " trials");
    }
}

void require_trials(const ExperimentConfig& cfg) {
    if (cfg.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
    if (!(cfg.stddev > 0.0)) throw Error(ErrorCode::InvalidArgument, "stddev must be positive");
}

}  // namespace

ExperimentConfig default_config(int experiment) {
    ExperimentConfig c;
    switch (experiment) {
        case 1:
            c.m_list = divisors_from_two(c.n);
            break;
        case 2:
            c.m_list = {10, 20};
            c.means = {1.0};
            break;
        case 3:
            c.trials = 100;
            for (std::size_t n = 2; n <= 200; ++n) c.n_list.push_back(n);
            break;
        default: throw Error(ErrorCode::InvalidArgument, "experiment must be 1, 2 or 3");
    }
    return c;
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double count = static_cast<double>(values.size());
    s.mean = sum / count;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
    }
    return s;
}

std::vector<RateCell> experiment1(const ExperimentConfig& cfg) {
    require_trials(cfg);
    const std::vector<std::size_t> ms = cfg.m_list.empty() ? divisors_from_two(cfg.n) : cfg.m_list;
    for (std::size_t m : ms) (void)partition_even(cfg.n, m);

    std::vector<RateCell> rows;
    for (std::size_t g = 0; g < cfg.means.size(); ++g) {
        const double mean = cfg.means[g];
        std::vector<TrialOutcome> outcomes(cfg.trials);
        parallel_for(cfg.trials, cfg.jobs, [&](std::size_t k) { outcomes[k] = accepted_trial(cfg.n, mean, cfg, ms, 1, g, k); });

        std::size_t rejections = 0;
        std::vector<double> hbm;
        for (const auto& o : outcomes) {
            rejections += o.rejections;
            hbm.push_back(o.rho_hbm);
        }
        check_rejections(rejections, cfg.trials);
        const Summary hbm_summary = summarize(hbm);
        for (std::size_t j = 0; j < ms.size(); ++j) {
            std::vector<double> apc;
            for (const auto& o : outcomes) apc.push_back(o.rho_apc[j]);
            rows.push_back(RateCell{mean, ms[j], cfg.n, summarize(apc), hbm_summary, cfg.trials, rejections});
        }
    }
    return rows;
}

std::vector<RateCell> experiment2(const ExperimentConfig& cfg) {
    require_trials(cfg);
    const std::vector<std::size_t> ms = cfg.m_list.empty() ? std::vector<std::size_t>{10, 20} : cfg.m_list;
    const double mean = cfg.means.empty() ? 1.0 : cfg.means.front();

    std::vector<RateCell> rows;
    std::uint64_t cell = 0;
    for (std::size_t m : ms) {
        std::vector<std::size_t> ns = cfg.n_list;
        if (ns.empty()) {
            for (std::size_t n = 2 * m; n <= 200; n += m) ns.push_back(n);
        }
        for (std::size_t n : ns) {
            (void)partition_even(n, m);
            std::vector<TrialOutcome> outcomes(cfg.trials);
            const std::vector<std::size_t> one{m};
            parallel_for(cfg.trials, cfg.jobs,
                         [&](std::size_t k) { outcomes[k] = accepted_trial(n, mean, cfg, one, 2, cell, k); });
            std::size_t rejections = 0;
            std::vector<double> apc;
            std::vector<double> hbm;
            for (const auto& o : outcomes) {
                rejections += o.rejections;
                apc.push_back(o.rho_apc.front());
                hbm.push_back(o.rho_hbm);
            }
            check_rejections(rejections, cfg.trials);
            rows.push_back(RateCell{mean, m, n, summarize(apc), summarize(hbm), cfg.trials, rejections});
            ++cell;
        }
    }
    return rows;
}

double max_cosine(std::size_t n, std::uint64_t seed) {
    DenseMatrix v = gaussian_matrix(n, n, 0.0, 1.0, seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = v.row(i);
        const double len = norm2(r);
        for (double& x : r) x /= len;
    }
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) c = std::max(c, std::abs(dot(v.row(i), v.row(j))));
    return c;
}

std::vector<CosineCell> experiment3(const ExperimentConfig& cfg) {
    require_trials(cfg);
    std::vector<std::size_t> ns = cfg.n_list;
    if (ns.empty()) ns = default_config(3).n_list;

    std::vector<CosineCell> rows;
    for (std::size_t cell = 0; cell < ns.size(); ++cell) {
        const std::size_t n = ns[cell];
        if (n < 2) throw Error(ErrorCode::InvalidArgument, "experiment 3 needs n >= 2");
        std::vector<double> c(cfg.trials);
        parallel_for(cfg.trials, cfg.jobs,
                     [&](std::size_t k) { c[k] = max_cosine(n, stream_seed(cfg.master_seed, k, salt(3, cell, 0))); });
        rows.push_back(CosineCell{n, summarize(c), cfg.trials});
    }
    return rows;
}

namespace {

std::string rate_rows(const char* header, const std::vector<RateCell>& rows, bool by_mu) {
    using io::format_double;
    std::string out = std::string(header) + "\n";
    for (const RateCell& r : rows) {
        out += by_mu ? format_double(r.mu) + "," + std::to_string(r.m) : std::to_string(r.m) + "," + std::to_string(r.n);
        out += "," + format_double(r.rho_apc.mean) + "," + format_double(r.rho_apc.se) + "," +
               format_double(r.rho_hbm.mean) + "," + format_double(r.rho_hbm.se) + "," + std::to_string(r.rejections) +
               "\n";
    }
    return out;
}

}  // namespace

std::string exp1_csv(const std::vector<RateCell>& rows) { return rate_rows(kExp1Header, rows, true); }
std::string exp2_csv(const std::vector<RateCell>& rows) { return rate_rows(kExp2Header, rows, false); }

std::string exp3_csv(const std::vector<CosineCell>& rows) {
    std::string out = std::string(kExp3Header) + "\n";
    for (const CosineCell& r : rows) {
        out += std::to_string(r.n) + "," + io::format_double(r.c.mean) + "," + io::format_double(r.c.se) + "\n";
    }
    return out;
}

}  // namespace heterosolve::montecarlo
