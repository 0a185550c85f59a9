#include <codbench/distance_transform.hpp>

#include <benchmark/benchmark.h>

#include "bench_common.hpp"

#include <random>

static void BM_NearestForegroundDisc(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto mask = bench::disc_mask(side, side);
    for (auto _ : state)
        benchmark::DoNotOptimize(codbench::nearest_foreground(mask));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mask.size()));
}
BENCHMARK(BM_NearestForegroundDisc)->Arg(128)->Arg(352)->Arg(1024);

static void BM_NearestForegroundSparse(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    std::mt19937 rng(11);
    std::bernoulli_distribution on(0.001);
    std::vector<std::uint8_t> v(static_cast<std::size_t>(side) * side);
    for (auto& x : v)
        x = on(rng);
    const codbench::BinaryMask mask(side, side, std::move(v));
    for (auto _ : state)
        benchmark::DoNotOptimize(codbench::nearest_foreground(mask));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mask.size()));
}
BENCHMARK(BM_NearestForegroundSparse)->Arg(352)->Arg(1024);
