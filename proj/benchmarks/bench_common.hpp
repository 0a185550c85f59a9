#pragma once

#include <codbench/raster.hpp>

#include <cmath>
#include <random>

namespace bench {

// A disc of foreground with a soft, noisy prediction around it.
inline codbench::BinaryMask disc_mask(int w, int h) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h, 0);
    const double r = 0.3 * std::min(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            v[static_cast<std::size_t>(y) * w + x] = std::hypot(x - 0.4 * w, y - 0.55 * h) < r;
    return codbench::BinaryMask(w, h, std::move(v));
}

inline codbench::ProbabilityMap noisy_prediction(const codbench::BinaryMask& gt, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> noise(0.0, 0.35);
    std::vector<double> v(gt.size());
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x) {
            const double n = noise(rng);
            v[static_cast<std::size_t>(y) * gt.width() + x] = gt.at(x, y) ? 1.0 - n : n;
        }
    return codbench::ProbabilityMap(gt.width(), gt.height(), std::move(v));
}

} // namespace bench
