#pragma once

// Straightforward reference implementations used to cross-check the library.
// They favour obviousness over speed: every quantity is computed from its
// definition with plain loops, brute-force searches and direct 2-D sums.

#include <codbench/raster.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

struct Image {
    int w = 0;
    int h = 0;
    std::vector<double> v; // row-major

    double operator()(int x, int y) const { return v[static_cast<std::size_t>(y * w + x)]; }
    double& operator()(int x, int y) { return v[static_cast<std::size_t>(y * w + x)]; }
};

Image from_map(const codbench::ProbabilityMap& m);
Image from_mask(const codbench::BinaryMask& m);

double mae(const Image& pred, const Image& gt);
double foreground_ratio(const Image& mask);
double s_measure(const Image& pred, const Image& gt);
double e_measure(const Image& pred, const Image& gt, double eps = 1e-8, double fixed_threshold = -1.0);
double weighted_f_measure(const Image& pred, const Image& gt, double eps = 1e-8);
double fpr(const Image& pred_bin);
double tnr(const Image& pred_bin);

// Nearest foreground pixel by exhaustive search. Ties: smallest x, then smallest y.
struct Nearest {
    std::vector<double> d2;
    std::vector<std::int64_t> index;
};
Nearest brute_force_nearest(const Image& mask);

// Direct 2-D Gaussian smoothing, (2r+1)^2 taps, normalized by the in-bounds mass.
Image gaussian_2d(const Image& img, int radius, double sigma);

// SSIM over a rectangle with population statistics.
double rect_ssim(const Image& a, const Image& b, int x0, int y0, int w, int h);

// Student-t CDF by composite Simpson integration of the density.
double student_t_cdf(double x, double dof);
// Inverse of student_t_cdf by bisection.
double student_t_quantile(double p, double dof);

struct CumulativeRow {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};
// Prefix-by-prefix mean and Student-t interval, each prefix recomputed from scratch.
std::vector<CumulativeRow> cumulative(const std::vector<double>& values, double confidence);

} // namespace oracle
