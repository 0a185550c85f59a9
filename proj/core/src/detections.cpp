#include "codbench/detections.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"

#include <nlohmann/json.hpp>

#include <unordered_set>

namespace codbench {

using nlohmann::json;

std::string_view to_string(LabelSource source) noexcept {
    switch (source) {
    case LabelSource::gsam:
        return "gsam";
    case LabelSource::cod_model:
        return "cod-model";
    case LabelSource::other:
        return "other";
    }
    return "other";
}

LabelSource parse_label_source(std::string_view text) {
    if (text == "gsam")
        return LabelSource::gsam;
    if (text == "cod-model")
        return LabelSource::cod_model;
    if (text == "other")
        return LabelSource::other;
    throw SchemaError("unknown label source '" + std::string(text) + "'");
}

std::vector<PseudoLabelRecord> parse_detections(const json& doc, const std::filesystem::path& mask_dir) {
    if (!doc.is_array())
        throw SchemaError("detections: top level must be a JSON array");

    std::vector<PseudoLabelRecord> records;
    records.reserve(doc.size());
    std::unordered_set<std::string> seen;

    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& entry = doc[i];
        const std::string where = "detections[" + std::to_string(i) + "]";
        if (!entry.is_object())
            throw SchemaError(where + ": entry must be an object");

        auto id = entry.find("image_id");
        if (id == entry.end() || !id->is_string() || id->get_ref<const std::string&>().empty())
            throw SchemaError(where + ": missing or non-string \"image_id\"");
        auto conf = entry.find("confidence");
        if (conf == entry.end() || !conf->is_number())
            throw SchemaError(where + ": missing or non-numeric \"confidence\"");

        PseudoLabelRecord rec;
        rec.image_id = id->get<std::string>();
        rec.confidence = conf->get<double>();
        if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0))
            throw SchemaError(where + " (" + rec.image_id + "): confidence " + conf->dump() + " outside [0,1]");
        if (!seen.insert(rec.image_id).second)
            throw SchemaError(where + ": duplicate image_id '" + rec.image_id + "'");

        if (auto bbox = entry.find("bbox"); bbox != entry.end() && !bbox->is_null()) {
            if (!bbox->is_array() || bbox->size() != 4)
                throw SchemaError(where + ": \"bbox\" must be [x0,y0,x1,y1]");
            std::array<double, 4> box{};
            for (std::size_t k = 0; k < 4; ++k) {
                if (!(*bbox)[k].is_number())
                    throw SchemaError(where + ": \"bbox\" entries must be numbers");
                box[k] = (*bbox)[k].get<double>();
            }
            rec.bbox = box;
        }

        std::string mask_name = rec.image_id + ".png";
        if (auto mask = entry.find("mask"); mask != entry.end()) {
            if (!mask->is_string())
                throw SchemaError(where + ": \"mask\" must be a string");
            mask_name = mask->get<std::string>();
        }
        rec.mask_ref = mask_dir.empty() ? std::filesystem::path(mask_name) : mask_dir / mask_name;

        if (auto src = entry.find("source"); src != entry.end()) {
            if (!src->is_string())
                throw SchemaError(where + ": \"source\" must be a string");
            rec.source = parse_label_source(src->get<std::string>());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<PseudoLabelRecord> load_detections(const std::filesystem::path& path,
                                               const std::filesystem::path& mask_dir) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError("detections file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_detections(doc, mask_dir);
}

} // namespace codbench
