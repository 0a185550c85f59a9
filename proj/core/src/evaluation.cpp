#include "codbench/evaluation.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"
#include "codbench/image_io.hpp"
#include "codbench/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <mutex>
#include <optional>
#include <sstream>

namespace codbench {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ImageMetrics evaluate_pair(const std::string& image_id, const ProbabilityMap& pred, const BinaryMask& gt,
                           const EvalConfig& config, std::vector<std::string>* warnings) {
    const ProbabilityMap p = same_dimensions(pred, gt) ? pred : resize_to(pred, gt.width(), gt.height());

    ImageMetrics m;
    m.image_id = image_id;
    m.mae = mae(p, gt);
    m.s_measure = s_measure(p, gt, config.metric);
    m.e_phi = e_measure(p, gt, config.metric);
    m.f_beta_w = weighted_f_measure(p, gt, config.metric);
    m.fg_ratio = foreground_ratio(binarize(p, config.binarize_threshold));
    if (gt.count_foreground() == 0 && warnings)
        warnings->push_back("ground truth '" + image_id + "' has no foreground; f_beta_w reported as 0");
    return m;
}

MetricReport make_metric_report(std::vector<ImageMetrics> rows, std::vector<std::string> warnings,
                                const EvalConfig& config) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    std::sort(warnings.begin(), warnings.end());

    MetricReport r;
    r.aggregate.image_id = "mean";
    if (!rows.empty()) {
        for (const auto& m : rows) {
            r.aggregate.mae += m.mae;
            r.aggregate.s_measure += m.s_measure;
            r.aggregate.e_phi += m.e_phi;
            r.aggregate.f_beta_w += m.f_beta_w;
            r.aggregate.fg_ratio += m.fg_ratio;
        }
        const double n = static_cast<double>(rows.size());
        r.aggregate.mae /= n;
        r.aggregate.s_measure /= n;
        r.aggregate.e_phi /= n;
        r.aggregate.f_beta_w /= n;
        r.aggregate.fg_ratio /= n;
    }
    r.per_image = std::move(rows);
    r.warnings = std::move(warnings);
    r.config = config;
    return r;
}

BackgroundReport make_background_report(std::vector<BackgroundMetrics> rows, std::vector<std::string> warnings,
                                        const EvalConfig& config) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    std::sort(warnings.begin(), warnings.end());

    BackgroundReport r;
    r.aggregate.image_id = "mean";
    if (!rows.empty()) {
        for (const auto& m : rows) {
            r.aggregate.fpr += m.fpr;
            r.aggregate.tnr += m.tnr;
        }
        r.aggregate.fpr /= static_cast<double>(rows.size());
        r.aggregate.tnr /= static_cast<double>(rows.size());
    }
    r.per_image = std::move(rows);
    r.warnings = std::move(warnings);
    r.config = config;
    return r;
}

MetricReport evaluate_directories(const fs::path& pred_dir, const fs::path& gt_dir, const EvalConfig& config) {
    const auto preds = list_images_by_stem(pred_dir);
    const auto gts = list_images_by_stem(gt_dir);

    std::vector<std::string> warnings;
    std::vector<std::pair<fs::path, fs::path>> pairs;
    std::vector<std::string> ids;
    for (const auto& [stem, path] : preds) {
        auto it = gts.find(stem);
        if (it == gts.end()) {
            warnings.push_back("no ground truth for prediction '" + stem + "'; skipped");
            continue;
        }
        pairs.emplace_back(path, it->second);
        ids.push_back(stem);
    }
    for (const auto& [stem, path] : gts)
        if (!preds.contains(stem))
            warnings.push_back("no prediction for ground truth '" + stem + "'; skipped");

    if (pairs.empty())
        throw InvalidArgument("no file stems in common between " + pred_dir.string() + " and " + gt_dir.string());

    std::vector<ImageMetrics> rows(pairs.size());
    std::mutex warn_mutex;
    parallel_for(pairs.size(), config.workers, [&](std::size_t i) {
        std::vector<std::string> local;
        rows[i] = evaluate_pair(ids[i], load_probability_map(pairs[i].first), load_binary_mask(pairs[i].second),
                                config, &local);
        if (!local.empty()) {
            std::lock_guard lock(warn_mutex);
            warnings.insert(warnings.end(), local.begin(), local.end());
        }
    });
    return make_metric_report(std::move(rows), std::move(warnings), config);
}

BackgroundReport evaluate_background_directory(const fs::path& pred_dir, const EvalConfig& config) {
    const auto preds = list_images_by_stem(pred_dir);
    if (preds.empty())
        throw InvalidArgument("no prediction images in " + pred_dir.string());

    std::vector<std::pair<std::string, fs::path>> items(preds.begin(), preds.end());
    std::vector<BackgroundMetrics> rows(items.size());
    parallel_for(items.size(), config.workers, [&](std::size_t i) {
        const BinaryMask pred = binarize(load_probability_map(items[i].second), config.binarize_threshold);
        const BinaryMask background(pred.width(), pred.height(), false);
        rows[i] = {items[i].first, fpr(pred, background), tnr(pred, background)};
    });
    return make_background_report(std::move(rows), {}, config);
}

ordered_json config_to_json(const EvalConfig& config) {
    ordered_json j;
    j["binarize_threshold"] = config.binarize_threshold;
    if (config.metric.em_threshold)
        j["em_threshold"] = *config.metric.em_threshold;
    else
        j["em_threshold"] = "adaptive";
    j["epsilon"] = config.metric.epsilon;
    j["resize"] = "prediction-to-gt-bilinear";
    j["aggregation"] = "per-image-mean";
    return j;
}

std::string config_csv_header(const EvalConfig& config) {
    std::ostringstream out;
    const auto j = config_to_json(config);
    for (const auto& [key, value] : j.items())
        out << "# " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    return out.str();
}

namespace {

void csv_row(std::ostringstream& out, const ImageMetrics& m) {
    out << m.image_id << ',' << format_fixed(m.mae) << ',' << format_fixed(m.s_measure) << ','
        << format_fixed(m.e_phi) << ',' << format_fixed(m.f_beta_w) << ',' << format_fixed(m.fg_ratio) << '\n';
}

ordered_json json_row(const ImageMetrics& m) {
    ordered_json j;
    j["image_id"] = m.image_id;
    j["mae"] = round_to(m.mae);
    j["s_measure"] = round_to(m.s_measure);
    j["e_phi"] = round_to(m.e_phi);
    j["f_beta_w"] = round_to(m.f_beta_w);
    j["fg_ratio"] = round_to(m.fg_ratio);
    return j;
}

ordered_json json_row(const BackgroundMetrics& m) {
    ordered_json j;
    j["image_id"] = m.image_id;
    j["fpr"] = round_to(m.fpr);
    j["tnr"] = round_to(m.tnr);
    return j;
}

template <class Report>
std::string report_json(const Report& report) {
    ordered_json j;
    j["config"] = config_to_json(report.config);
    j["per_image"] = ordered_json::array();
    for (const auto& m : report.per_image)
        j["per_image"].push_back(json_row(m));
    ordered_json agg = json_row(report.aggregate);
    agg.erase("image_id");
    j["aggregate"] = std::move(agg);
    j["count"] = report.per_image.size();
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

} // namespace

std::string to_csv(const MetricReport& report) {
    std::ostringstream out;
    out << config_csv_header(report.config);
    out << "image_id,mae,s_measure,e_phi,f_beta_w,fg_ratio\n";
    for (const auto& m : report.per_image)
        csv_row(out, m);
    csv_row(out, report.aggregate);
    return out.str();
}

std::string to_csv(const BackgroundReport& report) {
    std::ostringstream out;
    out << config_csv_header(report.config);
    out << "image_id,fpr,tnr\n";
    for (const auto& m : report.per_image)
        out << m.image_id << ',' << format_fixed(m.fpr) << ',' << format_fixed(m.tnr) << '\n';
    out << "mean," << format_fixed(report.aggregate.fpr) << ',' << format_fixed(report.aggregate.tnr) << '\n';
    return out.str();
}

std::string to_json_text(const MetricReport& report) { return report_json(report); }
std::string to_json_text(const BackgroundReport& report) { return report_json(report); }

void write_report(const fs::path& out_dir, const MetricReport& report) {
    write_file_atomic(out_dir / "metrics.json", to_json_text(report));
    write_file_atomic(out_dir / "metrics.csv", to_csv(report));
}

void write_report(const fs::path& out_dir, const BackgroundReport& report) {
    write_file_atomic(out_dir / "background.json", to_json_text(report));
    write_file_atomic(out_dir / "background.csv", to_csv(report));
}

} // namespace codbench
