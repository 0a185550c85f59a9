#include "codbench/manifest.hpp"

#include "codbench/errors.hpp"
#include "codbench/file_util.hpp"

#include <nlohmann/json.hpp>

namespace codbench {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(ScaleScope scope) noexcept {
    return scope == ScaleScope::all ? "all" : "survivors";
}

ScaleScope parse_scale_scope(std::string_view text) {
    if (text == "survivors")
        return ScaleScope::survivors;
    if (text == "all")
        return ScaleScope::all;
    throw InvalidArgument("scale scope must be 'survivors' or 'all', got '" + std::string(text) + "'");
}

void CurationConfig::validate() const {
    auto check = [](const std::optional<double>& t, const char* name) {
        if (t && !(*t >= 0.0 && *t <= 1.0))
            throw InvalidArgument(std::string(name) + " must lie in [0,1], got " + std::to_string(*t));
    };
    check(t_c, "t_c");
    check(t_f, "t_f");
}

std::string_view to_string(RejectReason reason) noexcept {
    switch (reason) {
    case RejectReason::confidence:
        return "confidence";
    case RejectReason::fg_ratio:
        return "fg_ratio";
    case RejectReason::io_error:
        return "io_error";
    }
    return "io_error";
}

RejectReason parse_reject_reason(std::string_view text) {
    if (text == "confidence")
        return RejectReason::confidence;
    if (text == "fg_ratio")
        return RejectReason::fg_ratio;
    if (text == "io_error")
        return RejectReason::io_error;
    throw SchemaError("unknown rejection reason '" + std::string(text) + "'");
}

ordered_json to_json(const CurationConfig& config) {
    ordered_json j;
    j["t_c"] = config.t_c ? ordered_json(*config.t_c) : ordered_json(nullptr);
    j["t_f"] = config.t_f ? ordered_json(*config.t_f) : ordered_json(nullptr);
    j["reweight"] = config.reweight;
    j["scale_scope"] = std::string(to_string(config.scale_scope));
    return j;
}

ordered_json to_json(const TrainingManifest& manifest) {
    ordered_json accepted = ordered_json::array();
    for (const auto& a : manifest.accepted) {
        ordered_json e;
        e["image_id"] = a.image_id;
        e["mask"] = a.mask;
        e["weight"] = round_to(a.weight);
        accepted.push_back(std::move(e));
    }
    ordered_json rejected = ordered_json::array();
    for (const auto& r : manifest.rejected) {
        ordered_json e;
        e["image_id"] = r.image_id;
        e["reason"] = std::string(to_string(r.reason));
        if (!r.detail.empty())
            e["detail"] = r.detail;
        rejected.push_back(std::move(e));
    }
    ordered_json j;
    j["accepted"] = std::move(accepted);
    j["rejected"] = std::move(rejected);
    j["config"] = to_json(manifest.config);
    return j;
}

TrainingManifest manifest_from_json(const json& doc) {
    try {
        TrainingManifest m;
        for (const auto& a : doc.at("accepted"))
            m.accepted.push_back({a.at("image_id").get<std::string>(), a.at("mask").get<std::string>(),
                                  a.at("weight").get<double>()});
        for (const auto& r : doc.at("rejected")) {
            RejectedSample rs;
            rs.image_id = r.at("image_id").get<std::string>();
            rs.reason = parse_reject_reason(r.at("reason").get<std::string>());
            if (r.contains("detail"))
                rs.detail = r.at("detail").get<std::string>();
            m.rejected.push_back(std::move(rs));
        }
        const auto& c = doc.at("config");
        if (!c.at("t_c").is_null())
            m.config.t_c = c.at("t_c").get<double>();
        if (!c.at("t_f").is_null())
            m.config.t_f = c.at("t_f").get<double>();
        m.config.reweight = c.at("reweight").get<bool>();
        if (c.contains("scale_scope"))
            m.config.scale_scope = parse_scale_scope(c.at("scale_scope").get<std::string>());
        return m;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("manifest: ") + e.what());
    }
}

std::string serialize_manifest(const TrainingManifest& manifest) { return to_json(manifest).dump(2) + "\n"; }

void save_manifest(const std::filesystem::path& path, const TrainingManifest& manifest) {
    write_file_atomic(path, serialize_manifest(manifest));
}

TrainingManifest load_manifest(const std::filesystem::path& path) {
    try {
        return manifest_from_json(json::parse(read_file(path)));
    } catch (const json::parse_error& e) {
        throw SchemaError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
}

} // namespace codbench
