#include <codbench/metrics.hpp>

#include <benchmark/benchmark.h>

#include "bench_common.hpp"

namespace {

template <auto Metric>
void BM_Metric(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto gt = bench::disc_mask(side, side);
    const auto pred = bench::noisy_prediction(gt, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(Metric(pred, gt, codbench::MetricOptions{}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gt.size()));
}

double mae_adapter(const codbench::ProbabilityMap& p, const codbench::BinaryMask& g, const codbench::MetricOptions&) {
    return codbench::mae(p, g);
}

} // namespace

BENCHMARK(BM_Metric<mae_adapter>)->Name("mae")->Arg(352)->Arg(704);
BENCHMARK(BM_Metric<codbench::s_measure>)->Name("s_measure")->Arg(352)->Arg(704);
BENCHMARK(BM_Metric<codbench::e_measure>)->Name("e_measure")->Arg(352)->Arg(704);
BENCHMARK(BM_Metric<codbench::weighted_f_measure>)->Name("weighted_f_measure")->Arg(352)->Arg(704);
