#include <benchmark/benchmark.h>

#include <heterosolve/montecarlo.hpp>
#include <heterosolve/numkernel.hpp>
#include <heterosolve/rates_bounds.hpp>
#include <heterosolve/solvers.hpp>
#include <heterosolve/system.hpp>

using namespace heterosolve;

namespace {

DenseMatrix square(std::size_t n) { return gaussian_matrix(n, n, 0.0, 1.0, 42); }

void BM_Qr(benchmark::State& state) {
    const DenseMatrix a = square(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(numkernel::qr_decompose(a));
}
BENCHMARK(BM_Qr)->Arg(32)->Arg(120)->Arg(200);

void BM_SymmetricSpectrum(benchmark::State& state) {
    const DenseMatrix g = gram(square(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(numkernel::symmetric_spectrum(g));
}
BENCHMARK(BM_SymmetricSpectrum)->Arg(32)->Arg(120)->Arg(200);

void BM_SingularValues(benchmark::State& state) {
    const DenseMatrix a = square(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(numkernel::singular_values(a));
}
BENCHMARK(BM_SingularValues)->Arg(32)->Arg(120);

// Everything one experiment-1 trial computes for a single machine count.
void BM_ApcRateForDraw(benchmark::State& state) {
    const std::size_t n = 120;
    const auto m = static_cast<std::size_t>(state.range(0));
    const DenseMatrix a = gaussian_matrix(n, n, 1.0, 1.0, 7);
    for (auto _ : state) {
        const auto bases = local_bases(a, partition_even(n, m));
        benchmark::DoNotOptimize(rates::rate_apc(numkernel::symmetric_spectrum(build_S(bases)).condition()));
    }
}
BENCHMARK(BM_ApcRateForDraw)->Arg(2)->Arg(12)->Arg(120);

void BM_ApcStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const LinearSystem sys = generate_gaussian(n, 0.0, 1.0, 3);
    const auto machines = build_machines(sys, partition_even(sys, 8));
    solvers::ApcState s = solvers::apc_init(machines);
    const solvers::ApcParams p{1.2, 1.5};
    for (auto _ : state) solvers::apc_step(s, machines, p);
}
BENCHMARK(BM_ApcStep)->Arg(64)->Arg(200);

void BM_HeavyBallStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const LinearSystem sys = generate_gaussian(n, 0.0, 1.0, 3);
    const auto machines = build_machines(sys, partition_even(sys, 8));
    solvers::CentralState s = solvers::central_init(n);
    for (auto _ : state) solvers::dhbm_step(s, machines, {1e-4, 0.9});
}
BENCHMARK(BM_HeavyBallStep)->Arg(64)->Arg(200);

void BM_MaxCosine(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(montecarlo::max_cosine(n, ++seed));
}
BENCHMARK(BM_MaxCosine)->Arg(10)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
