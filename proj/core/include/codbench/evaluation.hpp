#pragma once

#include "codbench/metrics.hpp"
#include "codbench/raster.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace codbench {

struct EvalConfig {
    // Threshold for turning predictions into masks (fg_ratio, background rates).
    double binarize_threshold = 0.5;
    MetricOptions metric;
    unsigned workers = 1;
};

struct ImageMetrics {
    std::string image_id;
    double mae = 0.0;
    double s_measure = 0.0;
    double e_phi = 0.0;
    double f_beta_w = 0.0;
    double fg_ratio = 0.0; // of the binarized prediction
};

/// Per-image metric rows sorted by image_id, plus their equal-weight means.
struct MetricReport {
    std::vector<ImageMetrics> per_image;
    ImageMetrics aggregate; // image_id "mean"
    std::vector<std::string> warnings;
    EvalConfig config;
};

struct BackgroundMetrics {
    std::string image_id;
    double fpr = 0.0;
    double tnr = 0.0;
};

struct BackgroundReport {
    std::vector<BackgroundMetrics> per_image;
    BackgroundMetrics aggregate;
    std::vector<std::string> warnings;
    EvalConfig config;
};

/// Scores one prediction against its ground truth. The prediction is resized
/// to the ground-truth resolution first. An all-background GT appends a
/// warning, since the weighted F-measure is then reported as 0.
ImageMetrics evaluate_pair(const std::string& image_id, const ProbabilityMap& pred, const BinaryMask& gt,
                           const EvalConfig& config, std::vector<std::string>* warnings = nullptr);

/// Sorts rows by image_id and fills the aggregate.
MetricReport make_metric_report(std::vector<ImageMetrics> rows, std::vector<std::string> warnings,
                                const EvalConfig& config);
BackgroundReport make_background_report(std::vector<BackgroundMetrics> rows, std::vector<std::string> warnings,
                                        const EvalConfig& config);

/// Pairs files by stem across the two directories. Unmatched stems become
/// warnings; an empty intersection throws InvalidArgument.
MetricReport evaluate_directories(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                                  const EvalConfig& config);

/// FPR/TNR of every prediction in `pred_dir` against an implicit all-background GT.
BackgroundReport evaluate_background_directory(const std::filesystem::path& pred_dir, const EvalConfig& config);

nlohmann::ordered_json config_to_json(const EvalConfig& config);
// "# key=value" lines echoed at the top of CSV outputs.
std::string config_csv_header(const EvalConfig& config);

std::string to_csv(const MetricReport& report);
std::string to_csv(const BackgroundReport& report);
std::string to_json_text(const MetricReport& report);
std::string to_json_text(const BackgroundReport& report);

// metrics.json + metrics.csv
void write_report(const std::filesystem::path& out_dir, const MetricReport& report);
// background.json + background.csv
void write_report(const std::filesystem::path& out_dir, const BackgroundReport& report);

} // namespace codbench
