#include <codbench/curation.hpp>
#include <codbench/errors.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace codbench;

namespace {

std::vector<PseudoLabelRecord> records_with(const std::vector<double>& confidences) {
    std::vector<PseudoLabelRecord> out;
    for (std::size_t i = 0; i < confidences.size(); ++i) {
        PseudoLabelRecord r;
        r.image_id = "img" + std::to_string(i);
        r.mask_ref = r.image_id + ".png";
        r.confidence = confidences[i];
        out.push_back(r);
    }
    return out;
}

// In-memory loader: mask "<id>.png" has `fg[id]` foreground pixels out of 100.
MaskLoader loader_for(std::map<std::string, int> fg) {
    return [fg](const std::filesystem::path& p) {
        auto it = fg.find(p.stem().string());
        if (it == fg.end())
            throw IoError("no such mask " + p.string());
        std::vector<std::uint8_t> v(100, 0);
        std::fill_n(v.begin(), it->second, 1);
        return BinaryMask(10, 10, std::move(v));
    };
}

std::set<std::string> ids(const std::vector<PseudoLabelRecord>& rs) {
    std::set<std::string> out;
    for (const auto& r : rs)
        out.insert(r.image_id);
    return out;
}

std::set<std::string> ids(const std::vector<Rejection>& rs) {
    std::set<std::string> out;
    for (const auto& r : rs)
        out.insert(r.record.image_id);
    return out;
}

} // namespace

TEST(Curation, ConfidenceThenReweightExample) {
    const auto recs = records_with({0.1, 0.2, 0.5, 0.9});
    CurationConfig cfg;
    cfg.t_c = 0.3;
    cfg.reweight = true;
    const auto m = build_manifest(recs, cfg);
    ASSERT_EQ(m.accepted.size(), 2u);
    EXPECT_EQ(m.accepted[0].image_id, "img2");
    EXPECT_EQ(m.accepted[0].weight, 0.0);
    EXPECT_EQ(m.accepted[1].image_id, "img3");
    EXPECT_EQ(m.accepted[1].weight, 1.0);
    ASSERT_EQ(m.rejected.size(), 2u);
    EXPECT_EQ(m.rejected[0].image_id, "img0");
    EXPECT_EQ(m.rejected[1].image_id, "img1");
    EXPECT_EQ(m.rejected[0].reason, RejectReason::confidence);
}

TEST(Curation, PassThroughWhenNothingActive) {
    const auto recs = records_with({0.1, 0.7, 0.4});
    const auto m = build_manifest(recs, CurationConfig{});
    ASSERT_EQ(m.accepted.size(), 3u);
    EXPECT_TRUE(m.rejected.empty());
    for (const auto& a : m.accepted)
        EXPECT_EQ(a.weight, 1.0);
}

TEST(Curation, ThresholdBoundariesAreInclusive) {
    const auto recs = records_with({0.3, 0.2999999});
    const auto p = partition_by_confidence(recs, 0.3);
    EXPECT_EQ(ids(p.accepted), std::set<std::string>{"img0"});

    const auto q = partition_by_fg_ratio(recs, 0.3, loader_for({{"img0", 30}, {"img1", 31}}));
    EXPECT_EQ(ids(q.accepted), std::set<std::string>{"img0"});
    EXPECT_EQ(q.rejected[0].reason, RejectReason::fg_ratio);
}

TEST(Curation, UnreadableMaskIsRejectedNotFatal) {
    const auto recs = records_with({0.5, 0.6});
    CurationConfig cfg;
    cfg.t_f = 0.5;
    CurationOptions opts;
    opts.load_mask = loader_for({{"img0", 10}});
    const auto m = build_manifest(recs, cfg, opts);
    ASSERT_EQ(m.accepted.size(), 1u);
    ASSERT_EQ(m.rejected.size(), 1u);
    EXPECT_EQ(m.rejected[0].image_id, "img1");
    EXPECT_EQ(m.rejected[0].reason, RejectReason::io_error);
}

TEST(Curation, PartitionsAreDisjointAndComplete) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> conf(1 + rng() % 40);
        std::map<std::string, int> fg;
        for (std::size_t i = 0; i < conf.size(); ++i) {
            conf[i] = u(rng);
            fg["img" + std::to_string(i)] = static_cast<int>(rng() % 101);
        }
        const auto recs = records_with(conf);
        const double t = u(rng);
        for (const auto& p : {partition_by_confidence(recs, t), partition_by_fg_ratio(recs, t, loader_for(fg))}) {
            const auto a = ids(p.accepted);
            const auto r = ids(p.rejected);
            std::set<std::string> inter;
            std::set_intersection(a.begin(), a.end(), r.begin(), r.end(), std::inserter(inter, inter.begin()));
            EXPECT_TRUE(inter.empty());
            EXPECT_EQ(a.size() + r.size(), recs.size());
        }
    }
}

TEST(Curation, RaisingConfidenceThresholdNeverGrowsKeptSet) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> conf(60);
    for (auto& c : conf)
        c = u(rng);
    const auto recs = records_with(conf);
    std::set<std::string> previous = ids(recs);
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const auto kept = ids(partition_by_confidence(recs, t).accepted);
        EXPECT_TRUE(std::includes(previous.begin(), previous.end(), kept.begin(), kept.end()));
        previous = kept;
    }
}

TEST(Curation, MinMaxScalingHitsEndpointsAndIsMonotone) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> conf(2 + rng() % 20);
        for (auto& c : conf)
            c = std::round(u(rng) * 20) / 20;
        const auto recs = records_with(conf);
        const auto scaled = minmax_scale(recs);
        const double lo = *std::min_element(conf.begin(), conf.end());
        const double hi = *std::max_element(conf.begin(), conf.end());
        for (std::size_t i = 0; i < conf.size(); ++i) {
            if (lo == hi) {
                EXPECT_EQ(scaled[i].scaled, 1.0);
                continue;
            }
            EXPECT_EQ(scaled[i].scaled == 0.0, conf[i] == lo);
            EXPECT_EQ(scaled[i].scaled == 1.0, conf[i] == hi);
            for (std::size_t j = 0; j < conf.size(); ++j)
                if (conf[i] <= conf[j])
                    EXPECT_LE(scaled[i].scaled, scaled[j].scaled);
        }
    }
}

TEST(Curation, MinMaxScalingIsAffineInvariant) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> conf(2 + rng() % 15);
        for (auto& c : conf)
            c = u(rng);
        const double a = 0.05 + 0.9 * u(rng);
        const double b = (1.0 - a) * u(rng);
        std::vector<double> moved(conf);
        for (auto& c : moved)
            c = a * c + b;
        const auto s1 = minmax_scale(records_with(conf));
        const auto s2 = minmax_scale(records_with(moved));
        for (std::size_t i = 0; i < conf.size(); ++i)
            EXPECT_NEAR(s1[i].scaled, s2[i].scaled, 1e-12);
    }
}

TEST(Curation, DegenerateBatchGetsUnitWeights) {
    const auto recs = records_with({0.6, 0.6, 0.6});
    CurationConfig cfg;
    cfg.reweight = true;
    for (const auto& a : build_manifest(recs, cfg).accepted)
        EXPECT_EQ(a.weight, 1.0);
    EXPECT_THROW(minmax_scale(std::vector<PseudoLabelRecord>{}), InvalidArgument);
}

TEST(Curation, ScaleScopeAllUsesEveryRecord) {
    const auto recs = records_with({0.0, 0.5, 0.75, 1.0});
    CurationConfig cfg;
    cfg.t_c = 0.5;
    cfg.reweight = true;
    cfg.scale_scope = ScaleScope::all;
    const auto m = build_manifest(recs, cfg);
    ASSERT_EQ(m.accepted.size(), 3u);
    EXPECT_EQ(m.accepted[0].weight, 0.5);
    EXPECT_EQ(m.accepted[1].weight, 0.75);
    EXPECT_EQ(m.accepted[2].weight, 1.0);
    cfg.scale_scope = ScaleScope::survivors;
    EXPECT_EQ(build_manifest(recs, cfg).accepted[0].weight, 0.0);
}

TEST(Curation, MaskPathsRelativeToRoot) {
    auto recs = records_with({0.5});
    recs[0].mask_ref = std::filesystem::path("root") / "sub" / "m.png";
    CurationOptions opts;
    opts.mask_root = "root";
    EXPECT_EQ(build_manifest(recs, CurationConfig{}, opts).accepted[0].mask, "sub/m.png");
}

TEST(Curation, SummaryLine) {
    TrainingManifest m;
    m.accepted = {{"a", "a.png", 0.0}, {"b", "b.png", 1.0}};
    m.rejected = {{"c", RejectReason::confidence, ""}};
    EXPECT_EQ(format_summary(summarize(m)), "accepted 2 | rejected 1 | weights [0.000000, 1.000000]");
}

TEST(Curation, InvalidConfigRejected) {
    CurationConfig cfg;
    cfg.t_c = -0.1;
    EXPECT_THROW(build_manifest(records_with({0.5}), cfg), InvalidArgument);
}
