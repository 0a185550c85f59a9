#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace codbench {

enum class LabelSource { gsam, cod_model, other };

std::string_view to_string(LabelSource source) noexcept;
LabelSource parse_label_source(std::string_view text);

/// One pseudo-label: the mask a detector/segmenter produced for an image and
/// the detector confidence attached to it.
struct PseudoLabelRecord {
    std::string image_id;
    std::filesystem::path mask_ref;
    double confidence = 0.0;
    LabelSource source = LabelSource::gsam;
    std::optional<std::array<double, 4>> bbox; // carried through, unused by curation
};

/// Parses a detections document: a JSON array of
/// {"image_id": str, "confidence": num, "bbox": [x0,y0,x1,y1]?, "mask": str?, "source": str?}.
/// `mask` defaults to "<image_id>.png" and is resolved against `mask_dir`.
/// Throws SchemaError on structural problems, out-of-range confidence or a
/// repeated image_id.
std::vector<PseudoLabelRecord> parse_detections(const nlohmann::json& doc,
                                                const std::filesystem::path& mask_dir = {});

std::vector<PseudoLabelRecord> load_detections(const std::filesystem::path& path,
                                               const std::filesystem::path& mask_dir = {});

} // namespace codbench
