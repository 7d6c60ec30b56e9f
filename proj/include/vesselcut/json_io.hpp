#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vesselcut/cutcost.hpp"
#include "vesselcut/error.hpp"
#include "vesselcut/evalbench.hpp"
#include "vesselcut/segment.hpp"

namespace vesselcut {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json rows_to_json(const ColumnRows& rows)
{
    Json arr = Json::array();
    for (const auto& r : rows) {
        if (r) {
            arr.push_back(*r);
        } else {
            arr.push_back(nullptr);
        }
    }
    return arr;
}

inline ColumnRows rows_from_json(const Json& arr)
{
    if (!arr.is_array()) throw Error(ErrorCode::IoError, "boundary must be an array");
    ColumnRows rows;
    rows.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_null()) {
            rows.emplace_back(std::nullopt);
        } else if (v.is_number_integer()) {
            rows.emplace_back(v.get<int>());
        } else {
            throw Error(ErrorCode::IoError, "boundary entries must be integers or null");
        }
    }
    return rows;
}

inline Json params_to_json(const CostParams& p)
{
    Json j;
    j["cost"] = to_string(p.mode);
    j["sigma"] = p.sigma;
    j["horizontal_factor"] = p.horizontal_factor;
    j["penalty_factor"] = p.penalty_factor;
    if (p.penalty_distance) {
        j["penalty_distance"] = *p.penalty_distance;
    } else {
        j["penalty_distance"] = nullptr;
    }
    j["seed_fraction"] = p.seed_fraction;
    j["width_normalization"] = p.normalize_width;
    return j;
}

inline Json ground_truth_to_json(const GroundTruth& gt)
{
    Json j;
    j["schema"] = kSchemaVersion;
    j["boundary"] = rows_to_json(gt.boundary);
    return j;
}

inline GroundTruth ground_truth_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("boundary")) {
        throw Error(ErrorCode::IoError, "ground truth must be an object with a boundary array");
    }
    return GroundTruth{rows_from_json(j.at("boundary"))};
}

/// Result document of one segmentation run.
inline Json segmentation_to_json(const std::string& image, const Segmentation& s, bool strict)
{
    Json j;
    j["schema"] = kSchemaVersion;
    j["image"] = image;
    j["params"] = params_to_json(s.labeling.params);
    j["fill_fraction"] = s.fill_fraction;
    j["cut_value"] = s.labeling.cut_value;
    j["boundary"] = rows_to_json(s.boundary.top_material_row);
    if (strict) {
        j["material_components"] = material_components(s.labeling);
        j["source_band_contact"] = source_band_contact(s.boundary, s.labeling);
    }
    return j;
}

inline Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
    }
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

inline void write_json(const std::filesystem::path& path, const Json& j)
{
    write_text(path, j.dump(2) + "\n");
}

} // namespace vesselcut
