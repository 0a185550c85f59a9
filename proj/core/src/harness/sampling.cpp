#include "codbench/harness/sampling.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

namespace codbench::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

void SamplePlan::validate() const {
    if (k < 1)
        throw InvalidArgument("k must be >= 1");
    if (runs < 1)
        throw InvalidArgument("runs must be >= 1");
    if (static_cast<std::size_t>(k) > train_pool.size())
        throw InvalidArgument("k = " + std::to_string(k) + " exceeds the training pool size " +
                              std::to_string(train_pool.size()));
    std::unordered_set<std::string> seen;
    for (const auto& id : train_pool)
        if (!seen.insert(id).second)
            throw InvalidArgument("duplicate id in training pool: " + id);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t run) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(run + 0x632BE59BD9B4E019ULL));
}

std::vector<std::vector<std::string>> draw_samples(const SamplePlan& plan) {
    plan.validate();
    const std::size_t n = plan.train_pool.size();
    const auto k = static_cast<std::size_t>(plan.k);

    std::vector<std::vector<std::string>> runs;
    runs.reserve(static_cast<std::size_t>(plan.runs));
    std::vector<std::size_t> order(n);
    for (int r = 0; r < plan.runs; ++r) {
        std::mt19937_64 engine(derive_stream_seed(plan.seed, static_cast<std::uint64_t>(r)));
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Partial Fisher-Yates: the first k slots are a uniform k-subset.
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_below(engine, n - i));
            std::swap(order[i], order[j]);
        }
        std::vector<std::string> sample;
        sample.reserve(k);
        for (std::size_t i = 0; i < k; ++i)
            sample.push_back(plan.train_pool[order[i]]);
        runs.push_back(std::move(sample));
    }
    return runs;
}

std::string sample_manifest_name(int k, int run) {
    return "k" + std::to_string(k) + "_run" + std::to_string(run) + ".txt";
}

std::vector<std::filesystem::path> write_sample_manifests(const SamplePlan& plan,
                                                          const std::vector<std::vector<std::string>>& samples,
                                                          const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> paths;
    for (std::size_t r = 0; r < samples.size(); ++r) {
        std::string text;
        for (const auto& id : samples[r])
            text += id + "\n";
        auto path = out_dir / sample_manifest_name(plan.k, static_cast<int>(r));
        write_file_atomic(path, text);
        paths.push_back(std::move(path));
    }
    return paths;
}

DatasetSplit split_dataset(const std::vector<std::string>& ids, const SplitFractions& f, std::uint64_t seed) {
    if (ids.empty())
        throw InvalidArgument("split_dataset: empty id list");
    for (double x : {f.train, f.val, f.test})
        if (!(x >= 0.0 && x <= 1.0))
            throw InvalidArgument("split fractions must lie in [0,1]");
    if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9)
        throw InvalidArgument("split fractions must sum to 1");

    const std::size_t n = ids.size();
    const auto n_train = std::min(n, static_cast<std::size_t>(std::llround(static_cast<double>(n) * f.train)));
    const auto n_val = std::min(n - n_train, static_cast<std::size_t>(std::llround(static_cast<double>(n) * f.val)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 engine(derive_stream_seed(seed, UINT64_MAX));
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_below(engine, i))]);

    auto take = [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                     order.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(idx.begin(), idx.end());
        std::vector<std::string> out;
        out.reserve(idx.size());
        for (auto i : idx)
            out.push_back(ids[i]);
        return out;
    };
    return {take(0, n_train), take(n_train, n_train + n_val), take(n_train + n_val, n)};
}

} // namespace codbench::harness
