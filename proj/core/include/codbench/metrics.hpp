#pragma once

#include "codbench/raster.hpp"

#include <optional>
#include <span>
#include <vector>

namespace codbench {

inline constexpr double kDefaultEpsilon = 1e-8;

/// Knobs shared by the metric battery. Defaults reproduce the standard COD
/// evaluation (alpha = 0.5 in S, beta = 1 in weighted F, adaptive E threshold).
struct MetricOptions {
    double epsilon = kDefaultEpsilon;
    // Fixed binarization threshold for the E-measure; adaptive when unset.
    std::optional<double> em_threshold;
};

/// Mean absolute error between a soft map and a binary mask.
double mae(const ProbabilityMap& pred, const BinaryMask& gt);

/// Fraction of foreground pixels.
double foreground_ratio(const BinaryMask& mask) noexcept;

/// Structure measure: 0.5 * object-aware + 0.5 * region-aware similarity.
/// Empty GT yields 1 - mean(pred); all-foreground GT yields mean(pred).
/// No epsilon enters: both denominators are nonzero whenever used.
double s_measure(const ProbabilityMap& pred, const BinaryMask& gt, const MetricOptions& opts = {});

/// Enhanced-alignment measure. The prediction is binarized at
/// min(1, 2 * mean(pred)) (or opts.em_threshold) with pred >= threshold, and
/// zero-valued pixels always stay background. Result clamped to [0,1].
double e_measure(const ProbabilityMap& pred, const BinaryMask& gt, const MetricOptions& opts = {});

/// Threshold used by e_measure for this prediction.
double e_measure_threshold(const ProbabilityMap& pred, const MetricOptions& opts = {});

/// Weighted F-measure (beta = 1). Returns 0 for an all-background GT, where
/// the measure is undefined; callers that care should check first.
double weighted_f_measure(const ProbabilityMap& pred, const BinaryMask& gt, const MetricOptions& opts = {});

/// False-positive rate FP / (TN + FP) on a background-only image. Throws
/// InvalidArgument if `gt` contains foreground.
double fpr(const BinaryMask& pred, const BinaryMask& gt);

/// True-negative rate TN / (TN + FP) on a background-only image.
double tnr(const BinaryMask& pred, const BinaryMask& gt);

/// (new - base) / base. Throws InvalidArgument when base == 0.
double relative_improvement(double new_value, double base);

/// (full - frugal) / full. Throws InvalidArgument when full == 0.
double relative_gap(double full, double frugal);

namespace detail {

// 1-D Gaussian taps exp(-i^2 / (2 sigma^2)) for i in [-radius, radius].
std::vector<double> gaussian_taps(int radius, double sigma);

// Separable Gaussian smoothing with zero extension, each output divided by the
// kernel mass that fell inside the image.
std::vector<double> gaussian_blur_normalized(std::span<const double> image, int width, int height, int radius,
                                             double sigma);

} // namespace detail

} // namespace codbench
