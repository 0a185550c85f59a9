#pragma once

#include "codbench/raster.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace codbench {

/// Exact Euclidean distance from every pixel to the nearest foreground pixel
/// of a mask, together with the linear index of that pixel.
///
/// Ties between equidistant foreground pixels resolve to the smallest column,
/// then the smallest row. Foreground pixels map to themselves at distance 0.
/// For a mask without foreground every distance is +inf and every index -1.
struct NearestForeground {
    int width = 0;
    int height = 0;
    std::vector<double> squared_distance;
    std::vector<std::int64_t> nearest_index;
};

NearestForeground nearest_foreground(const BinaryMask& mask);

namespace detail {

// Lower envelope of the parabolas (q - p)^2 + f(p) over the finite entries of
// `f`; writes the minimum value and the minimizing p for every q. Ties pick the
// smallest p. Inputs hold exact integers, so all comparisons are exact.
void squared_distance_1d(std::span<const double> f, std::span<double> out_value,
                         std::span<std::int32_t> out_arg);

} // namespace detail

} // namespace codbench
