#include <benchmark/benchmark.h>

#include <omp.h>

#include "rangewalk/convolve.hpp"
#include "rangewalk/engine.hpp"
#include "rangewalk/kernels.hpp"
#include "rangewalk/montecarlo.hpp"
#include "rangewalk/pmf.hpp"

using namespace rangewalk;

namespace {

template <class V>
Grid<V> filled(int dim, int radius) {
    Grid<V> g(dim, radius, V(0));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = V(static_cast<long>(1 + (i * 7919) % 1013));
    return g;
}

template <class A, bool Parallel>
void BM_Convolve(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const int radius = static_cast<int>(state.range(1));
    const auto w = make_step_weights<A>(uniform_cube(dim));
    const auto in = filled<typename A::value_type>(dim, radius);
    Grid<typename A::value_type> out(dim, radius);
    for (auto _ : state) {
        if constexpr (Parallel)
            convolve(in, w, out);
        else
            convolve_serial(in, w, out);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
    state.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
}

void BM_KernelExact(benchmark::State& state) {
    const IncrementPmf pmf = simple_symmetric(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(n_step_kernel<ExactArith>(pmf, static_cast<int>(state.range(1))));
}

void BM_PascalExact(benchmark::State& state) {
    const IncrementPmf pmf = simple_symmetric(static_cast<int>(state.range(0)));
    const TrapTrajectory phi = random_phi(1, 25, uniform_cube(pmf.dim()));
    for (auto _ : state) benchmark::DoNotOptimize(verify_pascal<ExactArith>(pmf, phi, 24));
}

void BM_McRange(benchmark::State& state) {
    const IncrementPmf pmf = simple_symmetric(2);
    const InsertionPath f = random_insertion(3, 40, uniform_cube(2));
    for (auto _ : state) benchmark::DoNotOptimize(mc_range(pmf, f, 40, static_cast<std::uint64_t>(state.range(0)), 7));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrapField(benchmark::State& state) {
    TrapSimConfig cfg;
    cfg.pmf = simple_symmetric(1);
    cfg.holding = HoldingLaw::exponential(1.0);
    cfg.horizon = 5.0;
    cfg.window = 60;
    cfg.reps = static_cast<std::uint64_t>(state.range(0));
    cfg.particle = ParticlePath::constant({0});
    for (auto _ : state) benchmark::DoNotOptimize(simulate_trap_field(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Convolve<FloatArith, false>)->Name("convolve/float/serial")->Args({1, 4096})->Args({2, 256})->Args({3, 40});
BENCHMARK(BM_Convolve<FloatArith, true>)->Name("convolve/float/openmp")->Args({1, 4096})->Args({2, 256})->Args({3, 40});
BENCHMARK(BM_Convolve<ExactArith, false>)->Name("convolve/exact/serial")->Args({1, 4096})->Args({2, 128})->Args({3, 24});
BENCHMARK(BM_Convolve<ExactArith, true>)->Name("convolve/exact/openmp")->Args({1, 4096})->Args({2, 128})->Args({3, 24});
BENCHMARK(BM_KernelExact)->Args({1, 200})->Args({2, 40})->Args({3, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PascalExact)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McRange)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrapField)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
