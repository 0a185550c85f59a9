#include <codbench/inpaint.hpp>

#include <benchmark/benchmark.h>

#include "bench_common.hpp"

static void BM_ScoreTiles(benchmark::State& state) {
    const auto gt = bench::disc_mask(512, 512);
    const auto a = bench::noisy_prediction(gt, 1);
    const auto b = bench::noisy_prediction(gt, 2);
    const auto grid = codbench::inpaint::make_tile_grid(512, 512, static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(codbench::inpaint::score_tiles(a, b, grid));
}
BENCHMARK(BM_ScoreTiles)->Arg(128)->Arg(64)->Arg(32);

static void BM_Heatmap(benchmark::State& state) {
    const auto gt = bench::disc_mask(512, 512);
    const auto a = bench::noisy_prediction(gt, 1);
    const auto map = codbench::inpaint::score_tiles(a, a, codbench::inpaint::make_tile_grid(512, 512, 32));
    for (auto _ : state)
        benchmark::DoNotOptimize(codbench::inpaint::similarity_to_heatmap(map, codbench::inpaint::SimilarityMetric::ssim));
}
BENCHMARK(BM_Heatmap);
