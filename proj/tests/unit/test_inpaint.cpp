#include <codbench/errors.hpp>
#include <codbench/image_io.hpp>
#include <codbench/inpaint.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_support.hpp"

#include <random>

using namespace codbench;
using namespace codbench::inpaint;

namespace {

std::size_t total_area(const TileGrid& g) {
    std::size_t a = 0;
    for (const auto& t : g.tiles)
        a += t.rect.area();
    return a;
}

} // namespace

TEST(TileGrid, PartitionsImage) {
    for (auto [w, h, tile] : std::vector<std::tuple<int, int, int>>{{512, 512, 128}, {512, 512, 32}, {100, 37, 16},
                                                                    {5, 5, 8}, {64, 1, 7}}) {
        const auto g = make_tile_grid(w, h, tile);
        EXPECT_EQ(total_area(g), static_cast<std::size_t>(w) * h);
        std::vector<int> cover(static_cast<std::size_t>(w * h), 0);
        for (const auto& t : g.tiles)
            for (int y = t.rect.y; y < t.rect.y + t.rect.height; ++y)
                for (int x = t.rect.x; x < t.rect.x + t.rect.width; ++x)
                    ++cover[static_cast<std::size_t>(y * w + x)];
        for (int c : cover)
            ASSERT_EQ(c, 1);
    }
    EXPECT_EQ(make_tile_grid(512, 512, 128).tiles.size(), 16u);
    EXPECT_EQ(make_tile_grid(512, 512, 64).tiles.size(), 64u);
    EXPECT_EQ(make_tile_grid(512, 512, 32).tiles.size(), 256u);
}

TEST(TileGrid, StridedWindowsCoverImage) {
    const auto g = make_tile_grid(100, 60, 32, 16);
    EXPECT_EQ(g.cols, 6);
    EXPECT_EQ(g.rows, 3);
    const auto& last = g.tiles.back();
    EXPECT_EQ(last.rect.x + last.rect.width, 100);
    EXPECT_EQ(last.rect.y + last.rect.height, 60);
    EXPECT_THROW(make_tile_grid(10, 10, 4, 5), InvalidArgument);
    EXPECT_THROW(make_tile_grid(10, 10, 0), InvalidArgument);
}

TEST(TileMasks, EmittedMasksMarkExactlyTheirTile) {
    testsupport::TempDir dir;
    const auto g = make_tile_grid(40, 30, 16);
    const auto paths = emit_tile_masks(g, dir.path());
    ASSERT_EQ(paths.size(), g.tiles.size());
    EXPECT_EQ(paths[1].filename(), "tile_0_1.png");
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const BinaryMask m = load_binary_mask(paths[i]);
        EXPECT_EQ(m.count_foreground(), g.tiles[i].rect.area());
        EXPECT_TRUE(m.at(g.tiles[i].rect.x, g.tiles[i].rect.y));
    }
}

TEST(TileScores, SelfSimilarityIsOne) {
    std::mt19937_64 rng(1);
    const auto img = testsupport::random_map(rng, 64, 48);
    for (int tile : {32, 16, 8}) {
        const auto scores = score_tiles(img, img, make_tile_grid(64, 48, tile));
        for (const auto& s : scores.scores) {
            EXPECT_EQ(s.pixel, 1.0);
            EXPECT_EQ(s.region, 1.0);
            EXPECT_NEAR(s.ssim, 1.0, 1e-12);
        }
    }
}

TEST(TileScores, MatchNaiveSsimAndStayInRange) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testsupport::random_map(rng, 33, 29);
        const auto b = testsupport::random_map(rng, 33, 29);
        const auto grid = make_tile_grid(33, 29, 8);
        const auto ab = score_tiles(a, b, grid);
        const auto ba = score_tiles(b, a, grid);
        const auto oa = oracle::from_map(a);
        const auto ob = oracle::from_map(b);
        for (std::size_t i = 0; i < grid.tiles.size(); ++i) {
            const auto& r = grid.tiles[i].rect;
            EXPECT_NEAR(window_ssim(a, b, r), oracle::rect_ssim(oa, ob, r.x, r.y, r.width, r.height), 1e-12);
            EXPECT_NEAR(ab.scores[i].ssim, ba.scores[i].ssim, 1e-12);
            for (auto m : {SimilarityMetric::pixel, SimilarityMetric::region, SimilarityMetric::ssim}) {
                EXPECT_GE(ab.scores[i].get(m), 0.0);
                EXPECT_LE(ab.scores[i].get(m), 1.0);
            }
            double diff = 0.0;
            for (int y = r.y; y < r.y + r.height; ++y)
                for (int x = r.x; x < r.x + r.width; ++x)
                    diff += std::abs(a.at(x, y) - b.at(x, y));
            EXPECT_NEAR(ab.scores[i].region, 1.0 - diff / static_cast<double>(r.area()), 1e-12);
            EXPECT_NEAR(ab.scores[i].pixel, ab.scores[i].region, 1e-12);
        }
    }
}

TEST(TileScores, PerTileInpaintedImages) {
    const GrayImage orig(16, 16, 0.5);
    const auto grid = make_tile_grid(16, 16, 8);
    const GrayImage same(16, 16, 0.5);
    const GrayImage dark(16, 16, 0.0);
    const auto scores = score_tiles(
        orig, [&](const Tile& t) -> const GrayImage& { return t.row == 1 && t.col == 0 ? dark : same; }, grid);
    EXPECT_EQ(scores.scores[0].region, 1.0);
    EXPECT_EQ(scores.scores[2].region, 0.5);
    EXPECT_EQ(scores.scores[2].pixel, 0.5);
}

TEST(Heatmap, NearestNeighbourBlocks) {
    const auto grid = make_tile_grid(512, 512, 128);
    TileSimilarityMap map{grid, {}};
    for (const auto& t : grid.tiles)
        map.scores.push_back({t.row, t.col, 1.0, (t.row * 4 + t.col) / 15.0, 1.0});
    const auto heat = similarity_to_heatmap(map, SimilarityMetric::region);
    EXPECT_EQ(heat.width(), 512);
    for (int y = 0; y < 512; y += 37)
        for (int x = 0; x < 512; x += 41)
            EXPECT_EQ(heat.at(x, y), ((y / 128) * 4 + x / 128) / 15.0);

    for (auto& s : map.scores)
        s.pixel = 0.7;
    map.scores[5].pixel = 0.1;
    const auto one = similarity_to_heatmap(map, SimilarityMetric::pixel);
    for (int y = 0; y < 512; y += 16)
        for (int x = 0; x < 512; x += 16) {
            const bool inside = x >= 128 && x < 256 && y >= 128 && y < 256;
            EXPECT_EQ(one.at(x, y), inside ? 0.1 : 0.7);
        }
}

TEST(TileScores, CsvLayout) {
    const GrayImage img(4, 4, 0.25);
    const auto csv = to_csv(score_tiles(img, img, make_tile_grid(4, 4, 2)));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "row,col,pixel,region,ssim");
    EXPECT_NE(csv.find("1,1,1.000000,1.000000,1.000000"), std::string::npos);
    EXPECT_EQ(parse_similarity_metric("ssim"), SimilarityMetric::ssim);
    EXPECT_THROW(parse_similarity_metric("psnr"), InvalidArgument);
}
