#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace codbench {

/// Per-pixel soft prediction in [0,1], row-major.
class ProbabilityMap {
public:
    ProbabilityMap(int width, int height, std::vector<double> values);
    ProbabilityMap(int width, int height, double fill);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    double at(int x, int y) const { return values_[index(x, y)]; }
    std::span<const double> values() const noexcept { return values_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    friend bool operator==(const ProbabilityMap&, const ProbabilityMap&) = default;

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

/// Grayscale image in [0,1]; same representation as a probability map.
using GrayImage = ProbabilityMap;

/// Per-pixel binary label (0 = background, 1 = foreground), row-major.
class BinaryMask {
public:
    BinaryMask(int width, int height, std::vector<std::uint8_t> values);
    BinaryMask(int width, int height, bool fill);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool at(int x, int y) const { return values_[index(x, y)] != 0; }
    std::span<const std::uint8_t> values() const noexcept { return values_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    std::size_t count_foreground() const noexcept;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> values_;
};

// pixel = 1 iff value > threshold
BinaryMask binarize(const ProbabilityMap& map, double threshold);

// 0/1 mask as a {0.0, 1.0} map
ProbabilityMap to_probability_map(const BinaryMask& mask);

/// Bilinear resampling with pixel-center alignment (sample positions
/// (x + 0.5) * in/out - 0.5, clamped at the borders). Output clamped to [0,1].
ProbabilityMap resize_to(const ProbabilityMap& map, int width, int height);

ProbabilityMap flip_horizontal(const ProbabilityMap& map);
BinaryMask flip_horizontal(const BinaryMask& mask);

bool same_dimensions(const ProbabilityMap& a, const BinaryMask& b) noexcept;

} // namespace codbench
