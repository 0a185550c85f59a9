#pragma once

#include "codbench/detections.hpp"
#include "codbench/manifest.hpp"
#include "codbench/raster.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace codbench {

struct Rejection {
    PseudoLabelRecord record;
    RejectReason reason = RejectReason::confidence;
    std::string detail;
};

/// Split of a record list into kept (S1) and discarded (S2) samples. Both keep
/// the input order.
struct Partition {
    std::vector<PseudoLabelRecord> accepted;
    std::vector<Rejection> rejected;
};

/// S1 = { r : r.confidence >= t_c }.
Partition partition_by_confidence(std::span<const PseudoLabelRecord> records, double t_c);

using MaskLoader = std::function<BinaryMask(const std::filesystem::path&)>;

/// S1 = { r : foreground_ratio(mask(r)) <= t_f }. A mask that fails to load
/// sends its record to S2 with reason io_error instead of aborting the batch.
Partition partition_by_fg_ratio(std::span<const PseudoLabelRecord> records, double t_f,
                                const MaskLoader& load_mask = {});

struct ScaledConfidence {
    std::string image_id;
    double raw = 0.0;
    double scaled = 0.0;
};

/// Min-max scaling of the confidences to [0,1]. If every confidence is equal
/// all scaled values are 1. Throws InvalidArgument on an empty list.
std::vector<ScaledConfidence> minmax_scale(std::span<const PseudoLabelRecord> records);

/// Same, but with the range taken from `reference` instead of `records`.
std::vector<ScaledConfidence> minmax_scale(std::span<const PseudoLabelRecord> records,
                                           std::span<const PseudoLabelRecord> reference);

struct CurationOptions {
    MaskLoader load_mask;             // defaults to load_binary_mask
    std::filesystem::path mask_root;  // manifest mask paths are written relative to this
};

/// Confidence filter (if t_c), then foreground-ratio filter on the survivors
/// (if t_f), then loss weights: min-max scaled confidence when reweighting,
/// otherwise 1. Rejected samples keep their input order and carry a reason.
TrainingManifest build_manifest(std::span<const PseudoLabelRecord> records, const CurationConfig& config,
                                const CurationOptions& options = {});

struct ManifestSummary {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double min_weight = 0.0;
    double max_weight = 0.0;
};

ManifestSummary summarize(const TrainingManifest& manifest) noexcept;

// "accepted 12 | rejected 8 | weights [0.000000, 1.000000]"
std::string format_summary(const ManifestSummary& summary);

} // namespace codbench
