#pragma once

#include "codbench/raster.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace codbench::inpaint {

struct TileRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    std::size_t area() const noexcept { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
};

struct Tile {
    int row = 0;
    int col = 0;
    TileRect rect;
};

/// Sliding-window layout over an image. With stride == tile_size (default)
/// the tiles partition the image; edge tiles are clipped, not padded.
struct TileGrid {
    int image_width = 0;
    int image_height = 0;
    int tile_size = 0;
    int stride = 0;
    int rows = 0;
    int cols = 0;
    std::vector<Tile> tiles; // row-major

    const Tile& at(int row, int col) const { return tiles[static_cast<std::size_t>(row * cols + col)]; }
};

/// stride 0 means stride = tile_size. Throws InvalidArgument on non-positive
/// sizes or stride > tile_size.
TileGrid make_tile_grid(int width, int height, int tile_size, int stride = 0);

/// "tile_{row}_{col}.png"
std::string tile_mask_name(int row, int col);

/// Full-image mask whose foreground (the hole to inpaint) is the tile rect.
BinaryMask tile_mask(const TileGrid& grid, const Tile& tile);

/// Writes one hole mask per tile into out_dir and returns the paths in grid order.
std::vector<std::filesystem::path> emit_tile_masks(const TileGrid& grid, const std::filesystem::path& out_dir);

enum class SimilarityMetric { pixel, region, ssim };

std::string_view to_string(SimilarityMetric metric) noexcept;
SimilarityMetric parse_similarity_metric(std::string_view text);

struct TileScore {
    int row = 0;
    int col = 0;
    double pixel = 0.0;  // mean over the tile of the per-pixel similarity 1 - |a - b|
    double region = 0.0; // 1 - MAE over the tile
    double ssim = 0.0;   // single-window SSIM over the tile, clamped to [0,1]

    double get(SimilarityMetric metric) const noexcept;
};

struct TileSimilarityMap {
    TileGrid grid;
    std::vector<TileScore> scores; // same order as grid.tiles
};

inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

/// SSIM of two images restricted to one rectangle, computed from the means,
/// (population) variances and covariance of the whole rectangle. Not clamped.
double window_ssim(const GrayImage& a, const GrayImage& b, const TileRect& rect);

/// Scores every tile of `grid` comparing `original` and `inpainted`.
TileSimilarityMap score_tiles(const GrayImage& original, const GrayImage& inpainted, const TileGrid& grid);

/// Per-tile variant: the inpainter produced one image per hole mask, and tile
/// (r, c) is scored against the image returned for it.
TileSimilarityMap score_tiles(const GrayImage& original,
                              const std::function<const GrayImage&(const Tile&)>& inpainted_for_tile,
                              const TileGrid& grid);

/// Nearest-neighbour upsampling of one score channel to image resolution.
/// Where strided tiles overlap, the later tile (row-major) wins.
ProbabilityMap similarity_to_heatmap(const TileSimilarityMap& map, SimilarityMetric metric);

/// Columns row,col,pixel,region,ssim; six decimals.
std::string to_csv(const TileSimilarityMap& map);

} // namespace codbench::inpaint
