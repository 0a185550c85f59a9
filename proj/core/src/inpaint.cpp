#include "codbench/inpaint.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"
#include "codbench/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace codbench::inpaint {

namespace fs = std::filesystem;

namespace {

// Window origins along one axis. A new window starts only while the previous
// one has not yet reached the end.
std::vector<int> origins(int extent, int tile, int stride) {
    std::vector<int> out{0};
    while (out.back() + tile < extent)
        out.push_back(out.back() + stride);
    return out;
}

void require_same_size(const GrayImage& a, const GrayImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch("original is " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " but inpainted image is " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()));
}

TileScore score_one(const GrayImage& a, const GrayImage& b, const Tile& tile) {
    const TileRect& r = tile.rect;
    const double n = static_cast<double>(r.area());

    double similarity_sum = 0.0; // per-pixel similarity map, then tile mean
    double abs_err_sum = 0.0;    // tile MAE
    for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) {
            const double e = std::abs(a.at(x, y) - b.at(x, y));
            similarity_sum += 1.0 - e;
            abs_err_sum += e;
        }

    TileScore s;
    s.row = tile.row;
    s.col = tile.col;
    s.pixel = std::clamp(similarity_sum / n, 0.0, 1.0);
    s.region = std::clamp(1.0 - abs_err_sum / n, 0.0, 1.0);
    s.ssim = std::clamp(window_ssim(a, b, r), 0.0, 1.0);
    return s;
}

} // namespace

TileGrid make_tile_grid(int width, int height, int tile_size, int stride) {
    if (width < 1 || height < 1)
        throw InvalidArgument("tile grid: image dimensions must be >= 1");
    if (tile_size < 1)
        throw InvalidArgument("tile grid: tile size must be >= 1");
    if (stride == 0)
        stride = tile_size;
    if (stride < 1 || stride > tile_size)
        throw InvalidArgument("tile grid: stride must lie in [1, tile size]");

    TileGrid g;
    g.image_width = width;
    g.image_height = height;
    g.tile_size = tile_size;
    g.stride = stride;
    const auto ys = origins(height, tile_size, stride);
    const auto xs = origins(width, tile_size, stride);
    g.rows = static_cast<int>(ys.size());
    g.cols = static_cast<int>(xs.size());
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) {
            const int y = ys[static_cast<std::size_t>(r)];
            const int x = xs[static_cast<std::size_t>(c)];
            g.tiles.push_back({r, c, {x, y, std::min(tile_size, width - x), std::min(tile_size, height - y)}});
        }
    return g;
}

std::string tile_mask_name(int row, int col) {
    return "tile_" + std::to_string(row) + "_" + std::to_string(col) + ".png";
}

BinaryMask tile_mask(const TileGrid& grid, const Tile& tile) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(grid.image_width) * grid.image_height, 0);
    for (int y = tile.rect.y; y < tile.rect.y + tile.rect.height; ++y)
        for (int x = tile.rect.x; x < tile.rect.x + tile.rect.width; ++x)
            v[static_cast<std::size_t>(y) * grid.image_width + x] = 1;
    return BinaryMask(grid.image_width, grid.image_height, std::move(v));
}

std::vector<fs::path> emit_tile_masks(const TileGrid& grid, const fs::path& out_dir) {
    std::vector<fs::path> paths;
    paths.reserve(grid.tiles.size());
    for (const Tile& t : grid.tiles) {
        auto path = out_dir / tile_mask_name(t.row, t.col);
        save_mask(path, tile_mask(grid, t));
        paths.push_back(std::move(path));
    }
    return paths;
}

std::string_view to_string(SimilarityMetric metric) noexcept {
    switch (metric) {
    case SimilarityMetric::pixel:
        return "pixel";
    case SimilarityMetric::region:
        return "region";
    case SimilarityMetric::ssim:
        return "ssim";
    }
    return "pixel";
}

SimilarityMetric parse_similarity_metric(std::string_view text) {
    if (text == "pixel")
        return SimilarityMetric::pixel;
    if (text == "region")
        return SimilarityMetric::region;
    if (text == "ssim")
        return SimilarityMetric::ssim;
    throw InvalidArgument("similarity metric must be pixel, region or ssim; got '" + std::string(text) + "'");
}

double TileScore::get(SimilarityMetric metric) const noexcept {
    switch (metric) {
    case SimilarityMetric::pixel:
        return pixel;
    case SimilarityMetric::region:
        return region;
    case SimilarityMetric::ssim:
        return ssim;
    }
    return pixel;
}

double window_ssim(const GrayImage& a, const GrayImage& b, const TileRect& r) {
    const double n = static_cast<double>(r.area());
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) {
            sum_a += a.at(x, y);
            sum_b += b.at(x, y);
        }
    const double mu_a = sum_a / n;
    const double mu_b = sum_b / n;

    double var_a = 0.0;
    double var_b = 0.0;
    double cov = 0.0;
    for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) {
            const double da = a.at(x, y) - mu_a;
            const double db = b.at(x, y) - mu_b;
            var_a += da * da;
            var_b += db * db;
            cov += da * db;
        }
    var_a /= n;
    var_b /= n;
    cov /= n;

    return ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
           ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
}

TileSimilarityMap score_tiles(const GrayImage& original, const GrayImage& inpainted, const TileGrid& grid) {
    require_same_size(original, inpainted);
    return score_tiles(original, [&](const Tile&) -> const GrayImage& { return inpainted; }, grid);
}

TileSimilarityMap score_tiles(const GrayImage& original, const std::function<const GrayImage&(const Tile&)>& inpainted_for_tile,
                              const TileGrid& grid) {
    if (original.width() != grid.image_width || original.height() != grid.image_height)
        throw DimensionMismatch("tile grid does not match the original image size");
    TileSimilarityMap out;
    out.grid = grid;
    out.scores.reserve(grid.tiles.size());
    for (const Tile& t : grid.tiles) {
        const GrayImage& other = inpainted_for_tile(t);
        require_same_size(original, other);
        out.scores.push_back(score_one(original, other, t));
    }
    return out;
}

ProbabilityMap similarity_to_heatmap(const TileSimilarityMap& map, SimilarityMetric metric) {
    const TileGrid& g = map.grid;
    std::vector<double> v(static_cast<std::size_t>(g.image_width) * g.image_height, 0.0);
    for (std::size_t i = 0; i < g.tiles.size(); ++i) {
        const TileRect& r = g.tiles[i].rect;
        const double s = map.scores[i].get(metric);
        for (int y = r.y; y < r.y + r.height; ++y)
            for (int x = r.x; x < r.x + r.width; ++x)
                v[static_cast<std::size_t>(y) * g.image_width + x] = s;
    }
    return ProbabilityMap(g.image_width, g.image_height, std::move(v));
}

std::string to_csv(const TileSimilarityMap& map) {
    std::ostringstream out;
    out << "row,col,pixel,region,ssim\n";
    for (const auto& s : map.scores)
        out << s.row << ',' << s.col << ',' << format_fixed(s.pixel) << ',' << format_fixed(s.region) << ','
            << format_fixed(s.ssim) << '\n';
    return out.str();
}

} // namespace codbench::inpaint
