#include "codbench/distance_transform.hpp"

#include <limits>

namespace codbench {

namespace detail {

void squared_distance_1d(std::span<const double> f, std::span<double> out_value, std::span<std::int32_t> out_arg) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::int32_t>(f.size());

    std::vector<std::int32_t> v; // parabola sites on the envelope
    std::vector<double> z;       // boundaries; v[k] is minimal on [z[k], z[k+1]]
    v.reserve(f.size());
    z.reserve(f.size() + 1);

    for (std::int32_t q = 0; q < n; ++q) {
        if (f[q] == inf)
            continue;
        if (v.empty()) {
            v.push_back(q);
            z.assign({-inf, inf});
            continue;
        }
        const double fq = f[q] + static_cast<double>(q) * q;
        double s = 0.0;
        while (true) {
            const std::int32_t p = v.back();
            s = (fq - (f[p] + static_cast<double>(p) * p)) / (2.0 * q - 2.0 * p);
            if (s <= z[v.size() - 1] && v.size() > 1) {
                v.pop_back();
                z.pop_back();
                continue;
            }
            break;
        }
        z.back() = s;
        v.push_back(q);
        z.push_back(inf);
    }

    if (v.empty()) {
        for (std::int32_t q = 0; q < n; ++q) {
            out_value[q] = inf;
            out_arg[q] = -1;
        }
        return;
    }

    std::size_t k = 0;
    for (std::int32_t q = 0; q < n; ++q) {
        while (z[k + 1] < q)
            ++k;
        const std::int32_t p = v[k];
        const double d = static_cast<double>(q - p);
        out_value[q] = d * d + f[p];
        out_arg[q] = p;
    }
}

} // namespace detail

NearestForeground nearest_foreground(const BinaryMask& mask) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int w = mask.width();
    const int h = mask.height();
    const std::size_t n = mask.size();

    // Pass 1: along each column, distance to the nearest foreground row.
    std::vector<double> col_value(n);
    std::vector<std::int32_t> col_arg(n);
    {
        std::vector<double> f(static_cast<std::size_t>(h));
        std::vector<double> val(static_cast<std::size_t>(h));
        std::vector<std::int32_t> arg(static_cast<std::size_t>(h));
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y)
                f[y] = mask.at(x, y) ? 0.0 : inf;
            detail::squared_distance_1d(f, val, arg);
            for (int y = 0; y < h; ++y) {
                col_value[mask.index(x, y)] = val[y];
                col_arg[mask.index(x, y)] = arg[y];
            }
        }
    }

    // Pass 2: along each row, combine the per-column results.
    NearestForeground out;
    out.width = w;
    out.height = h;
    out.squared_distance.resize(n);
    out.nearest_index.resize(n);
    {
        std::vector<double> val(static_cast<std::size_t>(w));
        std::vector<std::int32_t> arg(static_cast<std::size_t>(w));
        for (int y = 0; y < h; ++y) {
            const std::size_t row = static_cast<std::size_t>(y) * w;
            std::span<const double> f(col_value.data() + row, static_cast<std::size_t>(w));
            detail::squared_distance_1d(f, val, arg);
            for (int x = 0; x < w; ++x) {
                out.squared_distance[row + x] = val[x];
                if (arg[x] < 0) {
                    out.nearest_index[row + x] = -1;
                } else {
                    const std::int32_t src_row = col_arg[row + arg[x]];
                    out.nearest_index[row + x] = static_cast<std::int64_t>(src_row) * w + arg[x];
                }
            }
        }
    }
    return out;
}

} // namespace codbench
