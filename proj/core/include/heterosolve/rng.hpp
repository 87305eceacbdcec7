#pragma once

#include <cstdint>
#include <random>

namespace heterosolve {

/// splitmix64 finalizer. Used to turn (master seed, trial, salt) into
/// well-separated engine seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seed for trial `trial` of a run started with `master`. `salt` separates
/// independent purposes (experiment, cell) sharing the same master seed.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t salt = 0) noexcept;

/// Engine plus standard normal sampler. libstdc++ implements both
/// deterministically, so a seed reproduces the same draws on every run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double normal(double mean, double stddev) { return mean + stddev * normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace heterosolve
