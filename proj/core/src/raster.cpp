#include "codbench/raster.hpp"

#include "codbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace codbench {

namespace {

void check_dimensions(int width, int height, std::size_t count) {
    if (width < 1 || height < 1)
        throw InvalidArgument("raster dimensions must be >= 1, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != count)
        throw InvalidArgument("raster value count " + std::to_string(count) + " does not match " +
                              std::to_string(width) + "x" + std::to_string(height));
}

// Exact for a == b, which keeps constant maps constant.
double lerp(double a, double b, double t) noexcept { return a + (b - a) * t; }

} // namespace

ProbabilityMap::ProbabilityMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_dimensions(width_, height_, values_.size());
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("probability map value out of [0,1]: " + std::to_string(v));
    }
}

ProbabilityMap::ProbabilityMap(int width, int height, double fill)
    : ProbabilityMap(width, height,
                     std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                             static_cast<std::size_t>(std::max(height, 0)),
                                         fill)) {}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
    check_dimensions(width_, height_, values_.size());
    for (auto v : values_) {
        if (v > 1)
            throw InvalidArgument("binary mask value must be 0 or 1, got " + std::to_string(v));
    }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : BinaryMask(width, height,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                               static_cast<std::size_t>(std::max(height, 0)),
                                           fill ? 1 : 0)) {}

std::size_t BinaryMask::count_foreground() const noexcept {
    return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

BinaryMask binarize(const ProbabilityMap& map, double threshold) {
    std::vector<std::uint8_t> out(map.size());
    auto in = map.values();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = in[i] > threshold ? 1 : 0;
    return BinaryMask(map.width(), map.height(), std::move(out));
}

ProbabilityMap to_probability_map(const BinaryMask& mask) {
    std::vector<double> out(mask.size());
    auto in = mask.values();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = in[i] ? 1.0 : 0.0;
    return ProbabilityMap(mask.width(), mask.height(), std::move(out));
}

ProbabilityMap resize_to(const ProbabilityMap& map, int width, int height) {
    if (width < 1 || height < 1)
        throw InvalidArgument("resize target must be >= 1x1");
    if (width == map.width() && height == map.height())
        return map;

    const double sx = static_cast<double>(map.width()) / width;
    const double sy = static_cast<double>(map.height()) / height;
    const int max_x = map.width() - 1;
    const int max_y = map.height() - 1;
    // Rounding must not push values outside the input range.
    const auto [lo_it, hi_it] = std::minmax_element(map.values().begin(), map.values().end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    std::vector<double> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
        int y0 = static_cast<int>(std::floor(fy));
        int y1 = std::min(y0 + 1, max_y);
        double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
            int x0 = static_cast<int>(std::floor(fx));
            int x1 = std::min(x0 + 1, max_x);
            double wx = fx - x0;
            double top = lerp(map.at(x0, y0), map.at(x1, y0), wx);
            double bottom = lerp(map.at(x0, y1), map.at(x1, y1), wx);
            out[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] =
                std::clamp(lerp(top, bottom, wy), lo, hi);
        }
    }
    return ProbabilityMap(width, height, std::move(out));
}

ProbabilityMap flip_horizontal(const ProbabilityMap& map) {
    std::vector<double> out(map.size());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            out[map.index(x, y)] = map.at(map.width() - 1 - x, y);
    return ProbabilityMap(map.width(), map.height(), std::move(out));
}

BinaryMask flip_horizontal(const BinaryMask& mask) {
    std::vector<std::uint8_t> out(mask.size());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            out[mask.index(x, y)] = mask.at(mask.width() - 1 - x, y) ? 1 : 0;
    return BinaryMask(mask.width(), mask.height(), std::move(out));
}

bool same_dimensions(const ProbabilityMap& a, const BinaryMask& b) noexcept {
    return a.width() == b.width() && a.height() == b.height();
}

} // namespace codbench
