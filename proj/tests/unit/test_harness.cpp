#include <codbench/errors.hpp>
#include <codbench/file_util.hpp>
#include <codbench/image_io.hpp>
#include <codbench/harness/protocol.hpp>
#include <codbench/harness/registry.hpp>
#include <codbench/harness/sampling.hpp>
#include <codbench/harness/statistics.hpp>
#include <codbench/harness/summary.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace codbench;
using namespace codbench::harness;
using testsupport::TempDir;

namespace {

std::vector<std::string> make_ids(int n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i)
        ids.push_back("id" + std::to_string(1000 + i));
    return ids;
}

// GT masks for a small test split plus per-run prediction directories.
struct ProtocolWorld {
    TempDir dir{"protocol"};
    std::filesystem::path gt = dir / "gt";
    std::filesystem::path preds = dir / "preds";
    std::vector<std::string> pool = make_ids(12);

    explicit ProtocolWorld(int runs, int k) {
        std::mt19937_64 rng(99);
        std::vector<BinaryMask> masks;
        for (int i = 0; i < 4; ++i) {
            BinaryMask m = testsupport::random_blob_mask(rng, 16, 12);
            while (m.count_foreground() == 0)
                m = testsupport::random_blob_mask(rng, 16, 12);
            save_mask(gt / ("t" + std::to_string(i) + ".png"), m);
            masks.push_back(m);
        }
        for (int r = 0; r < runs; ++r)
            for (int i = 0; i < 4; ++i)
                save_map(preds / ("k" + std::to_string(k) + "_run" + std::to_string(r)) /
                             ("t" + std::to_string(i) + ".png"),
                         testsupport::noisy_copy(rng, masks[static_cast<std::size_t>(i)], 0.1 * (r + 1)));
    }

    ProtocolConfig config(int runs, int k) const {
        ProtocolConfig c;
        c.method = "HitNet";
        c.plan = {k, runs, 7, pool};
        c.gt_dir = gt;
        c.work_dir = dir / "work";
        c.predictions_root = preds;
        return c;
    }
};

} // namespace

TEST(Sampling, DeterministicAndWithoutReplacement) {
    const SamplePlan plan{5, 30, 42, make_ids(40)};
    const auto a = draw_samples(plan);
    const auto b = draw_samples(plan);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.size(), 30u);
    for (const auto& run : a) {
        ASSERT_EQ(run.size(), 5u);
        EXPECT_EQ(std::set<std::string>(run.begin(), run.end()).size(), 5u);
    }
    EXPECT_NE(a[0], a[1]);
    SamplePlan other = plan;
    other.seed = 43;
    EXPECT_NE(draw_samples(other), a);
}

TEST(Sampling, ManifestsAreByteIdentical) {
    TempDir d1;
    TempDir d2;
    const SamplePlan plan{3, 4, 42, make_ids(10)};
    const auto p1 = write_sample_manifests(plan, draw_samples(plan), d1.path());
    const auto p2 = write_sample_manifests(plan, draw_samples(plan), d2.path());
    ASSERT_EQ(p1.size(), 4u);
    EXPECT_EQ(p1[2].filename(), "k3_run2.txt");
    for (std::size_t i = 0; i < p1.size(); ++i)
        EXPECT_EQ(testsupport::read_text(p1[i]), testsupport::read_text(p2[i]));
    EXPECT_EQ(read_id_list(p1[0]).size(), 3u);
}

TEST(Sampling, PlanValidation) {
    EXPECT_THROW(draw_samples({0, 1, 0, make_ids(3)}), InvalidArgument);
    EXPECT_THROW(draw_samples({4, 1, 0, make_ids(3)}), InvalidArgument);
    EXPECT_THROW(draw_samples({1, 0, 0, make_ids(3)}), InvalidArgument);
    EXPECT_NO_THROW(draw_samples({3, 1, 0, make_ids(3)}));
}

TEST(Sampling, UniformBelowCoversRange) {
    std::mt19937_64 eng(1);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i)
        ++hits[uniform_below(eng, 7)];
    for (int h : hits)
        EXPECT_GT(h, 800);
}

TEST(Split, PaperProportions) {
    const auto s = split_dataset(make_ids(1000), {}, 42);
    EXPECT_EQ(s.train.size(), 480u);
    EXPECT_EQ(s.val.size(), 120u);
    EXPECT_EQ(s.test.size(), 400u);
}

TEST(Split, DisjointAndComplete) {
    for (int n : {1, 7, 50, 333}) {
        const auto ids = make_ids(n);
        const auto s = split_dataset(ids, {0.5, 0.25, 0.25}, static_cast<std::uint64_t>(n));
        std::multiset<std::string> all;
        all.insert(s.train.begin(), s.train.end());
        all.insert(s.val.begin(), s.val.end());
        all.insert(s.test.begin(), s.test.end());
        EXPECT_EQ(all, std::multiset<std::string>(ids.begin(), ids.end()));
        EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), ids.size());
    }
    EXPECT_EQ(split_dataset(make_ids(20), {}, 1).train, split_dataset(make_ids(20), {}, 1).train);
}

TEST(Statistics, TQuantileMatchesIntegrationOracle) {
    for (int dof = 1; dof <= 40; ++dof)
        for (double p : {0.9, 0.95, 0.975, 0.995})
            EXPECT_NEAR(student_t_quantile(p, dof), oracle::student_t_quantile(p, dof), 1e-9) << dof << " " << p;
    EXPECT_NEAR(student_t_quantile(0.975, 1), 12.7062047361747, 1e-9);
    EXPECT_NEAR(student_t_quantile(0.975, 29), 2.04522964213270, 1e-9);
}

TEST(Statistics, CumulativeMatchesOracle) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.7, 0.05);
    RunSeries s{"cell", {}};
    for (int i = 0; i < 30; ++i)
        s.values.push_back(noise(rng));
    const auto rows = cumulative_stats(s, 0.95);
    const auto want = oracle::cumulative(s.values, 0.95);
    ASSERT_EQ(rows.size(), 30u);
    EXPECT_FALSE(rows[0].ci_low);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].n, static_cast<int>(i + 1));
        EXPECT_NEAR(rows[i].cum_mean, want[i].mean, 1e-12);
        if (i > 0) {
            EXPECT_NEAR(*rows[i].ci_low, want[i].low, 1e-9);
            EXPECT_NEAR(*rows[i].ci_high, want[i].high, 1e-9);
        }
    }
    const double plain = std::accumulate(s.values.begin(), s.values.end(), 0.0) / 30.0;
    EXPECT_NEAR(rows.back().cum_mean, plain, 1e-12);
}

TEST(Statistics, ConstantSeriesHasZeroWidthInterval) {
    const auto rows = cumulative_stats({"c", std::vector<double>(10, 0.5)});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(*rows[i].ci_low, 0.5);
        EXPECT_EQ(*rows[i].ci_high, 0.5);
    }
}

TEST(Statistics, HalfWidthScalesWithTOverRootN) {
    // Alternating +-1 around 0 has sample variance n/(n-1) for even n; rescale
    // each prefix so the sample standard deviation is exactly 1.
    for (int n = 2; n <= 30; n += 2) {
        std::vector<double> v;
        const double scale = std::sqrt((n - 1.0) / n);
        for (int i = 0; i < n; ++i)
            v.push_back((i % 2 ? -1.0 : 1.0) * scale);
        const auto rows = cumulative_stats({"c", v});
        const double half = (*rows.back().ci_high - *rows.back().ci_low) / 2.0;
        EXPECT_NEAR(half, student_t_quantile(0.975, n - 1) / std::sqrt(n), 1e-12) << n;
    }
}

TEST(Statistics, Errors) {
    EXPECT_THROW(cumulative_stats({"e", {}}), InvalidArgument);
    EXPECT_THROW(cumulative_stats({"e", {0.1}}, 1.0), InvalidArgument);
}

TEST(Statistics, CsvRows) {
    const auto rows = cumulative_stats({"c", {0.5, 0.5}});
    EXPECT_EQ(stats_csv_header(), "label,n,cum_mean,ci_low,ci_high\n");
    EXPECT_EQ(stats_to_csv_rows("c", rows), "c,1,0.500000,,\nc,2,0.500000,0.500000,0.500000\n");
}

TEST(Registry, CellOrdering) {
    std::vector<std::string> cells{"full", "30", "base", "5", "100", "zz", "1"};
    std::sort(cells.begin(), cells.end(), cell_less);
    EXPECT_EQ(cells, (std::vector<std::string>{"base", "1", "5", "30", "100", "full", "zz"}));
}

TEST(Registry, AppendReloadAndLastWins) {
    TempDir dir;
    const auto path = dir / "reg.jsonl";
    {
        Registry reg(path);
        reg.append({"HitNet", "30", 0, {{"f_beta_w", 0.7}}, RunStatus::ok, ""});
        reg.append({"HitNet", "base", 0, {{"f_beta_w", 0.5}}, RunStatus::ok, ""});
        reg.append({"HitNet", "30", 1, {}, RunStatus::failed, "boom"});
        reg.append({"HitNet", "30", 0, {{"f_beta_w", 0.75}}, RunStatus::ok, ""});
    }
    Registry again(path);
    EXPECT_TRUE(again.contains("HitNet", "30", 1));
    EXPECT_FALSE(again.contains("HitNet", "30", 2));
    EXPECT_EQ(again.find("HitNet", "30", 0)->metrics.at("f_beta_w"), 0.75);
    EXPECT_EQ(again.find("HitNet", "30", 1)->error, "boom");
    const auto recs = load_registry(path);
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].cell, "base");
    EXPECT_THROW(load_registry(dir / "none.jsonl"), IoError);

    const auto line = to_json(recs[1]).dump();
    EXPECT_EQ(line, R"({"method":"HitNet","k":30,"run":0,"metrics":{"f_beta_w":0.75},"status":"ok"})");
}

TEST(Summary, ImprovementAndGapTables) {
    std::vector<RunRecord> recs;
    auto add = [&](const std::string& cell, int run, double f) {
        recs.push_back({"HitNet", cell, run, {{"f_beta_w", f}, {"mae", 1 - f}}, RunStatus::ok, ""});
    };
    add("base", 0, 0.564);
    add("30", 0, 0.75);
    add("30", 1, 0.756);
    add("full", 0, 0.828);
    recs.push_back({"HitNet", "30", 2, {}, RunStatus::failed, "oom"});
    const auto table = summarize_cells(recs);
    EXPECT_EQ(table.cells, (std::vector<std::string>{"base", "30", "full"}));
    EXPECT_NEAR(*table.value("HitNet", "30"), 0.753, 1e-12);
    EXPECT_EQ(table.find("HitNet", "30")->runs_failed, 1);
    EXPECT_NEAR(*table.improvement("HitNet", "full"), 0.4680851, 1e-6);
    EXPECT_NEAR(*table.improvement("HitNet", "30"), 0.3351064, 1e-6);
    EXPECT_FALSE(table.improvement("HitNet", "base"));
    EXPECT_NEAR(*table.gap("HitNet", "30"), (0.828 - 0.753) / 0.828, 1e-12);
    EXPECT_FALSE(table.gap("HitNet", "full"));

    const std::string md = render_markdown(table);
    EXPECT_NE(md.find("Base model"), std::string::npos);
    EXPECT_NE(md.find("k=30"), std::string::npos);
    EXPECT_NE(md.find("Fully fine-tuned"), std::string::npos);
    EXPECT_NE(md.find("+46.8%"), std::string::npos);
    EXPECT_NE(md.find("oom"), std::string::npos);
    const std::string csv = render_csv(table);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,cell,runs,failed,mae,f_beta_w,improvement_vs_base,gap_to_full");
}

TEST(Protocol, HookExpansionQuotesPaths) {
    EXPECT_EQ(expand_hook("train {manifest} {out_dir} {k} {run}", "a b.txt", "o'd", 30, 2),
              "train 'a b.txt' 'o'\\''d' 30 2");
}

TEST(Protocol, PrecomputedModeRecordsPerRunMetrics) {
    ProtocolWorld world(3, 2);
    Registry reg(world.dir / "reg.jsonl");
    const auto result = run_protocol(world.config(3, 2), reg);
    EXPECT_EQ(result.executed, 3);
    EXPECT_EQ(result.failed, 0);
    const auto recs = reg.records();
    ASSERT_EQ(recs.size(), 3u);
    for (int r = 0; r < 3; ++r) {
        EvalConfig eval;
        const auto report = evaluate_directories(world.preds / ("k2_run" + std::to_string(r)), world.gt, eval);
        EXPECT_NEAR(recs[static_cast<std::size_t>(r)].metrics.at("f_beta_w"), report.aggregate.f_beta_w, 1e-12);
        EXPECT_NEAR(recs[static_cast<std::size_t>(r)].metrics.at("mae"), report.aggregate.mae, 1e-12);
    }
    EXPECT_TRUE(std::filesystem::exists(world.dir / "work" / "samples" / "k2_run0.txt"));
}

TEST(Protocol, ResumingDoesNotChangeTheRegistry) {
    ProtocolWorld world(3, 2);
    const auto path = world.dir / "reg.jsonl";
    {
        Registry reg(path);
        run_protocol(world.config(3, 2), reg);
    }
    const std::string once = testsupport::read_text(path);
    Registry reg(path);
    const auto second = run_protocol(world.config(3, 2), reg);
    EXPECT_EQ(second.executed, 0);
    EXPECT_EQ(second.skipped, 3);
    EXPECT_EQ(testsupport::read_text(path), once);
}

TEST(Protocol, HookThatCopiesGroundTruthIsPerfect) {
    ProtocolWorld world(2, 3);
    auto cfg = world.config(2, 3);
    cfg.predictions_root.reset();
    cfg.hook_command = "test -s {manifest} && cp " + shell_quote(world.gt.string()) + "/*.png {out_dir}/";
    Registry reg(world.dir / "reg.jsonl");
    const auto result = run_protocol(cfg, reg);
    EXPECT_EQ(result.failed, 0);
    for (const auto& rec : reg.records()) {
        ASSERT_EQ(rec.status, RunStatus::ok);
        EXPECT_EQ(rec.cell, "3");
        EXPECT_EQ(rec.metrics.at("mae"), 0.0);
        EXPECT_NEAR(rec.metrics.at("s_measure"), 1.0, 1e-6);
        EXPECT_GE(rec.metrics.at("e_phi"), 0.999);
        EXPECT_NEAR(rec.metrics.at("f_beta_w"), 1.0, 1e-6);
    }
}

TEST(Protocol, FailuresAreRecordedAndRetriedOnRequest) {
    ProtocolWorld world(2, 2);
    auto cfg = world.config(3, 2); // run 2 has no predictions
    const auto path = world.dir / "reg.jsonl";
    Registry reg(path);
    const auto first = run_protocol(cfg, reg);
    EXPECT_EQ(first.failed, 1);
    EXPECT_EQ(reg.find("HitNet", "2", 2)->status, RunStatus::failed);

    EXPECT_EQ(run_protocol(cfg, reg).executed, 0);
    cfg.retry_failed = true;
    const auto retry = run_protocol(cfg, reg);
    EXPECT_EQ(retry.executed, 1);
    EXPECT_EQ(retry.failed, 1);

    auto hook_cfg = world.config(1, 2);
    hook_cfg.method = "SINet-V2";
    hook_cfg.predictions_root.reset();
    hook_cfg.hook_command = "exit 4";
    EXPECT_EQ(run_protocol(hook_cfg, reg).failed, 1);
    EXPECT_NE(reg.find("SINet-V2", "2", 0)->error.find("status 4"), std::string::npos);
}

TEST(Protocol, RequiresExactlyOneSource) {
    ProtocolWorld world(1, 1);
    auto cfg = world.config(1, 1);
    cfg.hook_command = "true";
    Registry reg(world.dir / "reg.jsonl");
    EXPECT_THROW(run_protocol(cfg, reg), InvalidArgument);
}
