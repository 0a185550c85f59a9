#include "codbench/curation.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"
#include "codbench/image_io.hpp"
#include "codbench/metrics.hpp"

#include <algorithm>
#include <unordered_map>

namespace codbench {

namespace fs = std::filesystem;

Partition partition_by_confidence(std::span<const PseudoLabelRecord> records, double t_c) {
    Partition out;
    for (const auto& r : records) {
        if (r.confidence >= t_c)
            out.accepted.push_back(r);
        else
            out.rejected.push_back({r, RejectReason::confidence,
                                    "confidence " + format_fixed(r.confidence) + " < t_c " + format_fixed(t_c)});
    }
    return out;
}

Partition partition_by_fg_ratio(std::span<const PseudoLabelRecord> records, double t_f, const MaskLoader& load_mask) {
    const MaskLoader& loader = load_mask ? load_mask : MaskLoader(load_binary_mask);
    Partition out;
    for (const auto& r : records) {
        double ratio = 0.0;
        try {
            ratio = foreground_ratio(loader(r.mask_ref));
        } catch (const std::exception& e) {
            out.rejected.push_back({r, RejectReason::io_error, e.what()});
            continue;
        }
        if (ratio <= t_f)
            out.accepted.push_back(r);
        else
            out.rejected.push_back(
                {r, RejectReason::fg_ratio, "fg_ratio " + format_fixed(ratio) + " > t_f " + format_fixed(t_f)});
    }
    return out;
}

std::vector<ScaledConfidence> minmax_scale(std::span<const PseudoLabelRecord> records,
                                           std::span<const PseudoLabelRecord> reference) {
    if (records.empty() || reference.empty())
        throw InvalidArgument("minmax_scale: empty record list");
    auto [lo_it, hi_it] = std::minmax_element(reference.begin(), reference.end(), [](const auto& a, const auto& b) {
        return a.confidence < b.confidence;
    });
    const double lo = lo_it->confidence;
    const double hi = hi_it->confidence;

    std::vector<ScaledConfidence> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const double scaled = hi == lo ? 1.0 : std::clamp((r.confidence - lo) / (hi - lo), 0.0, 1.0);
        out.push_back({r.image_id, r.confidence, scaled});
    }
    return out;
}

std::vector<ScaledConfidence> minmax_scale(std::span<const PseudoLabelRecord> records) {
    return minmax_scale(records, records);
}

TrainingManifest build_manifest(std::span<const PseudoLabelRecord> records, const CurationConfig& config,
                                const CurationOptions& options) {
    config.validate();

    std::vector<PseudoLabelRecord> survivors(records.begin(), records.end());
    std::vector<Rejection> rejected;

    if (config.t_c) {
        Partition p = partition_by_confidence(survivors, *config.t_c);
        survivors = std::move(p.accepted);
        rejected.insert(rejected.end(), p.rejected.begin(), p.rejected.end());
    }
    if (config.t_f) {
        Partition p = partition_by_fg_ratio(survivors, *config.t_f, options.load_mask);
        survivors = std::move(p.accepted);
        rejected.insert(rejected.end(), p.rejected.begin(), p.rejected.end());
    }

    // Report rejections in input order.
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < records.size(); ++i)
        position.emplace(records[i].image_id, i);
    std::stable_sort(rejected.begin(), rejected.end(), [&](const Rejection& a, const Rejection& b) {
        return position[a.record.image_id] < position[b.record.image_id];
    });

    std::vector<double> weights(survivors.size(), 1.0);
    if (config.reweight && !survivors.empty()) {
        auto scaled = config.scale_scope == ScaleScope::all ? minmax_scale(survivors, records) : minmax_scale(survivors);
        for (std::size_t i = 0; i < scaled.size(); ++i)
            weights[i] = scaled[i].scaled;
    }

    auto mask_text = [&](const fs::path& p) {
        if (options.mask_root.empty())
            return p.generic_string();
        return p.lexically_relative(options.mask_root).generic_string();
    };

    TrainingManifest m;
    m.config = config;
    for (std::size_t i = 0; i < survivors.size(); ++i)
        m.accepted.push_back({survivors[i].image_id, mask_text(survivors[i].mask_ref), weights[i]});
    for (auto& r : rejected)
        m.rejected.push_back({r.record.image_id, r.reason, std::move(r.detail)});
    return m;
}

ManifestSummary summarize(const TrainingManifest& manifest) noexcept {
    ManifestSummary s;
    s.accepted = manifest.accepted.size();
    s.rejected = manifest.rejected.size();
    if (!manifest.accepted.empty()) {
        auto [lo, hi] = std::minmax_element(manifest.accepted.begin(), manifest.accepted.end(),
                                            [](const auto& a, const auto& b) { return a.weight < b.weight; });
        s.min_weight = lo->weight;
        s.max_weight = hi->weight;
    }
    return s;
}

std::string format_summary(const ManifestSummary& s) {
    return "accepted " + std::to_string(s.accepted) + " | rejected " + std::to_string(s.rejected) + " | weights [" +
           format_fixed(s.min_weight) + ", " + format_fixed(s.max_weight) + "]";
}

} // namespace codbench
