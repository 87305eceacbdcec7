#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cli {

// Flag values as parsed. Every optional left empty falls back to the
// config file, then to the built-in default.

struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    bool json = false;  // analyze/rates: print JSON instead of the summary
};

struct SystemFlags {
    std::optional<std::string> matrix;
    std::optional<std::string> rhs;
    std::optional<std::string> xstar;
    std::vector<std::size_t> sizes;
    std::optional<std::size_t> machines;
};

struct SolveFlags {
    std::optional<std::string> method;
    std::optional<double> gamma, eta, alpha, beta, mu, tol;
    std::optional<std::size_t> max_iters;
};

struct ExperimentFlags {
    std::optional<std::size_t> n;
    std::optional<std::size_t> trials;
    std::vector<std::size_t> m_list;
    std::vector<std::size_t> n_list;
    std::vector<double> means;
    std::optional<double> stddev;
    std::optional<double> kappa_reject;
};

struct GenerateFlags {
    std::optional<std::size_t> n;
    std::optional<double> mean;
    std::optional<double> stddev;
};

// Each returns the process exit code; library errors propagate.
int cmd_analyze(const CommonFlags& common, const SystemFlags& sys);
int cmd_rates(const CommonFlags& common, const SystemFlags& sys);
int cmd_solve(const CommonFlags& common, const SystemFlags& sys, const SolveFlags& solve);
int cmd_experiment(int id, const CommonFlags& common, const ExperimentFlags& exp);
int cmd_generate(const CommonFlags& common, const GenerateFlags& gen);

}  // namespace cli
