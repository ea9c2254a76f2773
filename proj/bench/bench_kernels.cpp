// Serial reference vs OpenMP kernels on the hot paths: domain sums,
// replicate fan-out, and smoothed-sum weights.

#include <benchmark/benchmark.h>

#include "randfield/estimation.hpp"
#include "randfield/fclt.hpp"
#include "randfield/fields.hpp"
#include "randfield/lattice.hpp"
#include "randfield/parallel.hpp"
#include "randfield/verify.hpp"

using namespace randfield;

namespace {

FieldModel two_tap_model() {
    return FieldModel::linear(LinearKernel::named("2tap", 2), NoiseSpec::parse("normal"));
}

void bm_partial_sum_serial(benchmark::State& state) {
    const Domain g = make_domain("box:n=" + std::to_string(state.range(0)) + ",d=2");
    const FieldModel model = two_tap_model();
    NoiseField noise{model.noise(), 1, 0};
    for (auto _ : state) benchmark::DoNotOptimize(partial_sum_serial(model, noise, g));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void bm_partial_sum_parallel(benchmark::State& state) {
    const Domain g = make_domain("box:n=" + std::to_string(state.range(0)) + ",d=2");
    const FieldModel model = two_tap_model();
    NoiseField noise{model.noise(), 1, 0};
    for (auto _ : state) benchmark::DoNotOptimize(partial_sum(model, noise, g).value);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void bm_replicates_serial(benchmark::State& state) {
    const Domain g = make_domain("box:n=24,d=2");
    const FieldModel model = two_tap_model();
    const std::size_t reps = static_cast<std::size_t>(state.range(0));
    std::vector<double> stats(reps);
    for (auto _ : state) {
        par::serial_index(reps, [&](std::size_t r) {
            NoiseField noise{model.noise(), 1, r};
            stats[r] = partial_sum_serial(model, noise, g);
        });
        benchmark::DoNotOptimize(stats.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_replicates_parallel(benchmark::State& state) {
    const Domain g = make_domain("box:n=24,d=2");
    const FieldModel model = two_tap_model();
    const std::size_t reps = static_cast<std::size_t>(state.range(0));
    std::vector<double> stats(reps);
    for (auto _ : state) {
        par::parallel_index(reps, [&](std::size_t r) {
            NoiseField noise{model.noise(), 1, r};
            stats[r] = partial_sum_serial(model, noise, g);
        });
        benchmark::DoNotOptimize(stats.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_smoothed_sum(benchmark::State& state) {
    const FieldModel model = two_tap_model();
    NoiseField noise{model.noise(), 1, 0};
    const IndexSet a = IndexSet::quadrant({0.7, 0.55});
    for (auto _ : state)
        benchmark::DoNotOptimize(smoothed_sum(model, noise, a, state.range(0)).value);
}

}  // namespace

BENCHMARK(bm_partial_sum_serial)->Arg(128)->Arg(256);
BENCHMARK(bm_partial_sum_parallel)->Arg(128)->Arg(256);
BENCHMARK(bm_replicates_serial)->Arg(512);
BENCHMARK(bm_replicates_parallel)->Arg(512);
BENCHMARK(bm_smoothed_sum)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
