#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace codbench {

/// Which confidences the min-max scaling runs over.
enum class ScaleScope {
    survivors, // records left after thresholding (default)
    all,       // every input record
};

std::string_view to_string(ScaleScope scope) noexcept;
ScaleScope parse_scale_scope(std::string_view text);

struct CurationConfig {
    std::optional<double> t_c; // confidence threshold, keep iff confidence >= t_c
    std::optional<double> t_f; // foreground-ratio threshold, keep iff ratio <= t_f
    bool reweight = false;
    ScaleScope scale_scope = ScaleScope::survivors;

    // Throws InvalidArgument if a threshold lies outside [0,1].
    void validate() const;
    bool any_active() const noexcept { return t_c || t_f || reweight; }
};

enum class RejectReason { confidence, fg_ratio, io_error };

std::string_view to_string(RejectReason reason) noexcept;
RejectReason parse_reject_reason(std::string_view text);

struct AcceptedSample {
    std::string image_id;
    std::string mask;
    double weight = 1.0;
};

struct RejectedSample {
    std::string image_id;
    RejectReason reason = RejectReason::confidence;
    std::string detail;
};

/// Curated split of the pseudo-labels into a training set (with per-sample
/// loss weights) and a rejected set.
struct TrainingManifest {
    std::vector<AcceptedSample> accepted;
    std::vector<RejectedSample> rejected;
    CurationConfig config;
};

nlohmann::ordered_json to_json(const CurationConfig& config);
nlohmann::ordered_json to_json(const TrainingManifest& manifest);
TrainingManifest manifest_from_json(const nlohmann::json& doc);

// Pretty JSON with a trailing newline; stable byte output.
std::string serialize_manifest(const TrainingManifest& manifest);
void save_manifest(const std::filesystem::path& path, const TrainingManifest& manifest);
TrainingManifest load_manifest(const std::filesystem::path& path);

} // namespace codbench
