#include "codbench/metrics.hpp"

#include "codbench/distance_transform.hpp"
#include "codbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace codbench {

namespace {

void require_same_dimensions(const ProbabilityMap& pred, const BinaryMask& gt, const char* metric) {
    if (!same_dimensions(pred, gt))
        throw DimensionMismatch(std::string(metric) + ": prediction is " + std::to_string(pred.width()) + "x" +
                                std::to_string(pred.height()) + " but ground truth is " +
                                std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
}

double mean_of(std::span<const double> v) noexcept {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
double sample_stddev(std::span<const double> v, double mean) noexcept {
    if (v.size() < 2)
        return 0.0;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Object-level similarity of a region's values to an all-ones target.
double object_score(std::span<const double> v) noexcept {
    const double m = mean_of(v);
    return 2.0 * m / (m * m + 1.0 + sample_stddev(v, m));
}

double s_object(const ProbabilityMap& pred, const BinaryMask& gt) {
    std::vector<double> fg;
    std::vector<double> bg;
    auto p = pred.values();
    auto g = gt.values();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (g[i])
            fg.push_back(p[i]);
        else
            bg.push_back(1.0 - p[i]);
    }
    const double mu = static_cast<double>(fg.size()) / static_cast<double>(p.size());
    return mu * object_score(fg) + (1.0 - mu) * object_score(bg);
}

struct Rect {
    int x0, y0, x1, y1; // half-open
    std::size_t area() const noexcept {
        return static_cast<std::size_t>(std::max(0, x1 - x0)) * static_cast<std::size_t>(std::max(0, y1 - y0));
    }
};

// SSIM-style structural similarity of one quadrant.
double quadrant_similarity(const ProbabilityMap& pred, const BinaryMask& gt, const Rect& r) {
    const double n = static_cast<double>(r.area());
    double sum_x = 0.0;
    double sum_y = 0.0;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
            sum_x += pred.at(x, y);
            sum_y += gt.at(x, y) ? 1.0 : 0.0;
        }
    const double mx = sum_x / n;
    const double my = sum_y / n;

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
            const double dx = pred.at(x, y) - mx;
            const double dy = (gt.at(x, y) ? 1.0 : 0.0) - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    if (n > 1.0) {
        sxx /= n - 1.0;
        syy /= n - 1.0;
        sxy /= n - 1.0;
    } else {
        sxx = syy = sxy = 0.0;
    }

    const double a = 4.0 * mx * my * sxy;
    const double b = (mx * mx + my * my) * (sxx + syy);
    // b >= |a|, so b is nonzero whenever a is.
    if (a != 0.0)
        return a / b;
    return b == 0.0 ? 1.0 : 0.0;
}

// Number of columns (rows) left of (above) the split line through the
// foreground centroid. Rounding half to even keeps the split mirror-symmetric
// for even image sizes.
int split_position(double centroid, int extent) {
    return std::clamp(static_cast<int>(std::nearbyint(centroid + 0.5)), 0, extent);
}

double s_region(const ProbabilityMap& pred, const BinaryMask& gt) {
    double sum_x = 0.0;
    double sum_y = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < gt.width(); ++x)
            if (gt.at(x, y)) {
                sum_x += x;
                sum_y += y;
                ++count;
            }
    const int cx = split_position(sum_x / static_cast<double>(count), gt.width());
    const int cy = split_position(sum_y / static_cast<double>(count), gt.height());
    const int w = gt.width();
    const int h = gt.height();

    const Rect quads[4] = {{0, 0, cx, cy}, {cx, 0, w, cy}, {0, cy, cx, h}, {cx, cy, w, h}};
    const double total = static_cast<double>(gt.size());
    double score = 0.0;
    for (const Rect& q : quads) {
        if (q.area() == 0)
            continue;
        score += static_cast<double>(q.area()) / total * quadrant_similarity(pred, gt, q);
    }
    return score;
}

} // namespace

double mae(const ProbabilityMap& pred, const BinaryMask& gt) {
    require_same_dimensions(pred, gt, "mae");
    auto p = pred.values();
    auto g = gt.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        sum += std::abs(p[i] - (g[i] ? 1.0 : 0.0));
    return sum / static_cast<double>(p.size());
}

double foreground_ratio(const BinaryMask& mask) noexcept {
    return static_cast<double>(mask.count_foreground()) / static_cast<double>(mask.size());
}

double s_measure(const ProbabilityMap& pred, const BinaryMask& gt, const MetricOptions& /*opts*/) {
    require_same_dimensions(pred, gt, "s_measure");
    const std::size_t fg = gt.count_foreground();
    const double pred_mean = mean_of(pred.values());
    if (fg == 0)
        return 1.0 - pred_mean;
    if (fg == gt.size())
        return pred_mean;

    constexpr double alpha = 0.5;
    const double s = alpha * s_object(pred, gt) + (1.0 - alpha) * s_region(pred, gt);
    return std::clamp(s, 0.0, 1.0);
}

double e_measure_threshold(const ProbabilityMap& pred, const MetricOptions& opts) {
    if (opts.em_threshold)
        return *opts.em_threshold;
    return std::min(1.0, 2.0 * mean_of(pred.values()));
}

double e_measure(const ProbabilityMap& pred, const BinaryMask& gt, const MetricOptions& opts) {
    require_same_dimensions(pred, gt, "e_measure");
    const double threshold = e_measure_threshold(pred, opts);
    auto p = pred.values();
    auto g = gt.values();
    const std::size_t n = p.size();

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = (p[i] >= threshold && p[i] > 0.0) ? 1.0 : 0.0;

    const std::size_t fg = gt.count_foreground();
    double enhanced_sum = 0.0;
    if (fg == 0) {
        for (double v : d)
            enhanced_sum += 1.0 - v;
    } else if (fg == n) {
        for (double v : d)
            enhanced_sum += v;
    } else {
        const double mean_g = static_cast<double>(fg) / static_cast<double>(n);
        const double mean_d = mean_of(d);
        for (std::size_t i = 0; i < n; ++i) {
            const double phi_g = (g[i] ? 1.0 : 0.0) - mean_g;
            const double phi_d = d[i] - mean_d;
            const double align = 2.0 * phi_g * phi_d / (phi_g * phi_g + phi_d * phi_d + opts.epsilon);
            enhanced_sum += (align + 1.0) * (align + 1.0) / 4.0;
        }
    }
    return std::clamp(enhanced_sum / (static_cast<double>(n) - 1.0 + opts.epsilon), 0.0, 1.0);
}

double weighted_f_measure(const ProbabilityMap& pred, const BinaryMask& gt, const MetricOptions& opts) {
    require_same_dimensions(pred, gt, "weighted_f_measure");
    const std::size_t fg = gt.count_foreground();
    if (fg == 0)
        return 0.0;

    const std::size_t n = gt.size();
    auto p = pred.values();
    auto g = gt.values();

    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i)
        err[i] = std::abs(p[i] - (g[i] ? 1.0 : 0.0));

    // Background pixels inherit the error of their nearest foreground pixel.
    const NearestForeground nearest = nearest_foreground(gt);
    std::vector<double> err_t(n);
    for (std::size_t i = 0; i < n; ++i)
        err_t[i] = g[i] ? err[i] : err[static_cast<std::size_t>(nearest.nearest_index[i])];

    const std::vector<double> err_a = detail::gaussian_blur_normalized(err_t, gt.width(), gt.height(), 3, 5.0);

    const double decay = std::log(0.5) / 5.0;
    double fg_weighted = 0.0;
    double bg_weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (g[i]) {
            fg_weighted += std::min(err[i], err_a[i]);
        } else {
            const double importance = 2.0 - std::exp(decay * std::sqrt(nearest.squared_distance[i]));
            bg_weighted += err[i] * importance;
        }
    }

    const double recall = 1.0 - fg_weighted / static_cast<double>(fg);
    const double tp = static_cast<double>(fg) - fg_weighted;
    const double precision = tp / (tp + bg_weighted + opts.epsilon);
    const double f = 2.0 * precision * recall / (precision + recall + opts.epsilon);
    return std::clamp(f, 0.0, 1.0);
}

namespace {

struct BackgroundCounts {
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
};

BackgroundCounts count_background(const BinaryMask& pred, const BinaryMask& gt, const char* metric) {
    if (pred.width() != gt.width() || pred.height() != gt.height())
        throw DimensionMismatch(std::string(metric) + ": prediction and ground truth differ in size");
    if (gt.count_foreground() != 0)
        throw InvalidArgument(std::string(metric) + " is only defined for background-only ground truth");
    BackgroundCounts c;
    c.false_positive = pred.count_foreground();
    c.true_negative = pred.size() - c.false_positive;
    return c;
}

} // namespace

double fpr(const BinaryMask& pred, const BinaryMask& gt) {
    auto c = count_background(pred, gt, "fpr");
    return static_cast<double>(c.false_positive) / static_cast<double>(c.true_negative + c.false_positive);
}

double tnr(const BinaryMask& pred, const BinaryMask& gt) {
    auto c = count_background(pred, gt, "tnr");
    return static_cast<double>(c.true_negative) / static_cast<double>(c.true_negative + c.false_positive);
}

double relative_improvement(double new_value, double base) {
    if (base == 0.0)
        throw InvalidArgument("relative_improvement: base value is 0");
    return (new_value - base) / base;
}

double relative_gap(double full, double frugal) {
    if (full == 0.0)
        throw InvalidArgument("relative_gap: full-data value is 0");
    return (full - frugal) / full;
}

namespace detail {

std::vector<double> gaussian_taps(int radius, double sigma) {
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    for (int i = -radius; i <= radius; ++i)
        taps[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    return taps;
}

std::vector<double> gaussian_blur_normalized(std::span<const double> image, int width, int height, int radius,
                                             double sigma) {
    const auto taps = gaussian_taps(radius, sigma);
    const auto w = static_cast<std::size_t>(width);
    std::vector<double> tmp(image.size());
    std::vector<double> out(image.size());

    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            double mass = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = x + i;
                if (xx < 0 || xx >= width)
                    continue;
                const double t = taps[static_cast<std::size_t>(i + radius)];
                acc += t * image[y * w + xx];
                mass += t;
            }
            tmp[y * w + x] = acc / mass;
        }

    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            double mass = 0.0;
            for (int j = -radius; j <= radius; ++j) {
                const int yy = y + j;
                if (yy < 0 || yy >= height)
                    continue;
                const double t = taps[static_cast<std::size_t>(j + radius)];
                acc += t * tmp[yy * w + x];
                mass += t;
            }
            out[y * w + x] = acc / mass;
        }
    return out;
}

} // namespace detail

} // namespace codbench
