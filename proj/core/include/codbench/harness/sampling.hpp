#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace codbench::harness {

/// One cell of the k-shot protocol: draw `k` training images, `runs` times.
struct SamplePlan {
    int k = 1;
    int runs = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> train_pool;

    // Throws InvalidArgument unless 1 <= k <= |pool| and runs >= 1.
    void validate() const;
};

/// Seed of the random stream used for run `run`, derived from the plan seed
/// with a SplitMix64 mix so neighbouring runs get unrelated streams.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t run) noexcept;

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection. Unlike
/// std::uniform_int_distribution the result is identical on every platform.
template <class Engine>
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = engine();
    } while (x >= limit);
    return x % bound;
}

/// Each run draws k distinct ids from the pool without replacement; runs are
/// independent of each other, so an id may recur across runs.
std::vector<std::vector<std::string>> draw_samples(const SamplePlan& plan);

/// "k{K}_run{R}.txt"
std::string sample_manifest_name(int k, int run);

/// Writes one manifest per run (one id per line) and returns the paths.
std::vector<std::filesystem::path> write_sample_manifests(const SamplePlan& plan,
                                                          const std::vector<std::vector<std::string>>& samples,
                                                          const std::filesystem::path& out_dir);

struct SplitFractions {
    double train = 0.48;
    double val = 0.12;
    double test = 0.40;
};

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

/// Seeded shuffle, then |train| = round(n * train), |val| = round(n * val),
/// the rest to test. Each part keeps the input order of its ids.
DatasetSplit split_dataset(const std::vector<std::string>& ids, const SplitFractions& fractions, std::uint64_t seed);

} // namespace codbench::harness
