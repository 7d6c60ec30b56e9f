#pragma once

// Manifest-driven evaluation: cost-parameter sweeps and synthetic datasets.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vesselcut/cutcost.hpp"
#include "vesselcut/error.hpp"
#include "vesselcut/evalbench.hpp"
#include "vesselcut/json_io.hpp"
#include "vesselcut/png_io.hpp"
#include "vesselcut/segment.hpp"

namespace vesselcut {

namespace fs = std::filesystem;

struct ManifestEntry {
    fs::path image;
    fs::path contour;
    fs::path groundtruth;
    MaterialClass material = MaterialClass::Liquid;
    int line = 0;
};

namespace detail {

inline std::string trim(std::string s)
{
    auto space = [](unsigned char ch) { return std::isspace(ch) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
    return s;
}

inline std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

inline std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace detail

/// Parses `image,contour,groundtruth,class` lines. Blank lines and lines
/// starting with '#' are ignored, as is a header line naming the columns.
/// Relative paths are resolved against `base`.
inline std::vector<ManifestEntry> parse_manifest(std::istream& in, const fs::path& base)
{
    std::vector<ManifestEntry> entries;
    std::string raw;
    int line_no = 0;
    bool first = true;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split_csv(line);
        if (first && fields.size() == 4 && detail::lower(fields[0]) == "image") {
            first = false;
            continue;
        }
        first = false;
        if (fields.size() != 4) {
            throw Error(ErrorCode::ManifestError,
                        "line " + std::to_string(line_no) + ": expected 4 fields, got " + std::to_string(fields.size()));
        }
        for (const auto& f : fields) {
            if (f.empty()) throw Error(ErrorCode::ManifestError, "line " + std::to_string(line_no) + ": empty field");
        }
        ManifestEntry e;
        auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
        e.image = resolve(fields[0]);
        e.contour = resolve(fields[1]);
        e.groundtruth = resolve(fields[2]);
        const std::string cls = detail::lower(fields[3]);
        if (cls == "liquid") {
            e.material = MaterialClass::Liquid;
        } else if (cls == "solid") {
            e.material = MaterialClass::Solid;
        } else {
            throw Error(ErrorCode::ManifestError,
                        "line " + std::to_string(line_no) + ": class must be liquid or solid, got '" + fields[3] + "'");
        }
        e.line = line_no;
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw Error(ErrorCode::ManifestError, "manifest lists no images");
    return entries;
}

inline std::vector<ManifestEntry> read_manifest(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ManifestError, "cannot open manifest " + path.string());
    return parse_manifest(in, path.parent_path());
}

inline std::string format_manifest(const std::vector<ManifestEntry>& entries, const fs::path& base)
{
    std::string out = "image,contour,groundtruth,class\n";
    for (const auto& e : entries) {
        out += fs::relative(e.image, base).generic_string() + "," + fs::relative(e.contour, base).generic_string() +
               "," + fs::relative(e.groundtruth, base).generic_string() + "," + to_string(e.material) + "\n";
    }
    return out;
}

/// A decoded evaluation sample.
struct EvalItem {
    std::string name;
    MaterialClass material = MaterialClass::Liquid;
    GrayImage image;
    VesselMask mask;
    GroundTruth truth;
};

inline EvalItem load_item(const ManifestEntry& e)
{
    EvalItem item;
    item.name = e.image.filename().string();
    item.material = e.material;
    item.image = to_grayscale(read_png(e.image));
    const ByteGrid contour = to_binary(read_png(e.contour));
    if (!item.image.same_shape(contour)) throw Error(ErrorCode::DimensionMismatch, "image and contour sizes differ");
    item.mask = mask_from_contour(contour);
    item.truth = ground_truth_from_json(read_json(e.groundtruth));
    if (item.truth.boundary.size() != static_cast<std::size_t>(item.image.width())) {
        throw Error(ErrorCode::DimensionMismatch, "ground truth column count differs from image width");
    }
    return item;
}

struct SweepSetting {
    std::string label;
    CostParams params;
};

/// One exponential setting per sigma, then optionally the linear cost.
inline std::vector<SweepSetting> sweep_settings(const std::vector<double>& sigmas, bool include_linear,
                                                const CostParams& base = {})
{
    std::vector<SweepSetting> out;
    for (double s : sigmas) {
        CostParams p = base;
        p.mode = CostMode::Exponential;
        p.sigma = s;
        p.auto_sigma = false;
        p.validate();
        char label[32];
        std::snprintf(label, sizeof label, "%g", s);
        out.push_back({label, p});
    }
    if (include_linear) {
        CostParams p = base;
        p.mode = CostMode::Linear;
        out.push_back({"linear", p});
    }
    if (out.empty()) throw Error(ErrorCode::InvalidParameter, "sweep needs at least one setting");
    return out;
}

inline std::vector<double> table_sigmas()
{
    return {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
}

struct SweepOptions {
    double tol_fraction = 0.05;
    int workers = 1;
};

struct ItemOutcome {
    std::string image;
    MaterialClass material = MaterialClass::Liquid;
    std::string setting;
    bool detected = false;
    std::optional<double> mean_abs_row_error;
    std::string failure;
};

struct SweepRow {
    std::string setting;
    int liquids = 0;
    int liquids_detected = 0;
    int solids = 0;
    int solids_detected = 0;

    [[nodiscard]] std::optional<double> liquid_rate() const
    {
        if (liquids == 0) return std::nullopt;
        return static_cast<double>(liquids_detected) / liquids;
    }
    [[nodiscard]] std::optional<double> solid_rate() const
    {
        if (solids == 0) return std::nullopt;
        return static_cast<double>(solids_detected) / solids;
    }
    [[nodiscard]] double overall_rate() const
    {
        const int n = liquids + solids;
        return n == 0 ? 0.0 : static_cast<double>(liquids_detected + solids_detected) / n;
    }
};

struct SkippedEntry {
    int line = 0;
    std::string image;
    std::string reason;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<ItemOutcome> details;
    std::vector<SkippedEntry> skipped;
    std::size_t n_images = 0;
};

/// Runs every setting on every item. Items are spread over `workers`
/// threads; the report is assembled in item order, so it does not depend on
/// the worker count.
inline SweepReport sweep_items(const std::vector<EvalItem>& items, const std::vector<SweepSetting>& settings,
                               const SweepOptions& options = {})
{
    if (items.empty()) throw Error(ErrorCode::ManifestError, "nothing to evaluate");
    const std::size_t n_settings = settings.size();
    std::vector<ItemOutcome> outcomes(items.size() * n_settings);

    auto evaluate = [&](std::size_t i) {
        const EvalItem& item = items[i];
        for (std::size_t k = 0; k < n_settings; ++k) {
            ItemOutcome& o = outcomes[i * n_settings + k];
            o.image = item.name;
            o.material = item.material;
            o.setting = settings[k].label;
            try {
                const PhaseLabeling labels = segment(item.image, item.mask, settings[k].params);
                const BoundaryCurve curve = extract_boundary(labels, item.mask);
                const DetectionScore score = detection_score(curve, item.truth, item.mask, options.tol_fraction);
                o.detected = score.detected;
                o.mean_abs_row_error = score.mean_abs_row_error;
            } catch (const Error& e) {
                o.detected = false;
                o.failure = e.what();
            }
        }
    };

    const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(items.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < items.size(); i = next++) evaluate(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    SweepReport report;
    report.n_images = items.size();
    report.details = std::move(outcomes);
    for (std::size_t k = 0; k < n_settings; ++k) {
        SweepRow row;
        row.setting = settings[k].label;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const ItemOutcome& o = report.details[i * n_settings + k];
            if (o.material == MaterialClass::Liquid) {
                ++row.liquids;
                row.liquids_detected += o.detected ? 1 : 0;
            } else {
                ++row.solids;
                row.solids_detected += o.detected ? 1 : 0;
            }
        }
        report.rows.push_back(row);
    }
    return report;
}

/// Loads every manifest entry (unreadable entries are skipped and listed in
/// the report) and sweeps the settings over them.
inline SweepReport sigma_sweep(const std::vector<ManifestEntry>& manifest, const std::vector<SweepSetting>& settings,
                               const SweepOptions& options = {})
{
    if (manifest.empty()) throw Error(ErrorCode::ManifestError, "manifest lists no images");
    std::vector<EvalItem> items;
    std::vector<SkippedEntry> skipped;
    for (const auto& e : manifest) {
        try {
            items.push_back(load_item(e));
        } catch (const Error& err) {
            skipped.push_back({e.line, e.image.generic_string(), err.what()});
        }
    }
    if (items.empty()) throw Error(ErrorCode::ManifestError, "no manifest entry could be loaded");
    SweepReport report = sweep_items(items, settings, options);
    report.skipped = std::move(skipped);
    return report;
}

namespace detail {

inline std::string percent(std::optional<double> rate)
{
    if (!rate) return "-";
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.0f%%", 100.0 * *rate);
    return buf;
}

inline std::string fixed(std::optional<double> rate)
{
    if (!rate) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *rate);
    return buf;
}

} // namespace detail

inline std::string render_table(const SweepReport& report)
{
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-8s  %8s  %8s  %8s\n", "sigma", "liquids", "solids", "images");
    out += buf;
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%-8s  %8s  %8s  %8d\n", row.setting.c_str(),
                      detail::percent(row.liquid_rate()).c_str(), detail::percent(row.solid_rate()).c_str(),
                      row.liquids + row.solids);
        out += buf;
    }
    if (!report.skipped.empty()) {
        out += "skipped " + std::to_string(report.skipped.size()) + " entr" +
               (report.skipped.size() == 1 ? "y" : "ies") + "\n";
        for (const auto& s : report.skipped) out += "  line " + std::to_string(s.line) + ": " + s.reason + "\n";
    }
    return out;
}

inline std::string render_csv(const SweepReport& report)
{
    std::string out = "setting,detection_rate_liquids,detection_rate_solids,n_liquids,n_solids,n_images\n";
    for (const auto& row : report.rows) {
        out += row.setting + "," + detail::fixed(row.liquid_rate()) + "," + detail::fixed(row.solid_rate()) + "," +
               std::to_string(row.liquids) + "," + std::to_string(row.solids) + "," +
               std::to_string(row.liquids + row.solids) + "\n";
    }
    return out;
}

/// Per-image outcomes, so other thresholds can be applied after the fact.
inline std::string render_details_csv(const SweepReport& report)
{
    std::string out = "image,class,setting,detected,mean_abs_row_error,failure\n";
    for (const auto& o : report.details) {
        std::string failure = o.failure;
        std::replace(failure.begin(), failure.end(), ',', ';');
        out += o.image + "," + to_string(o.material) + "," + o.setting + "," + (o.detected ? "1" : "0") + "," +
               detail::fixed(o.mean_abs_row_error) + "," + failure + "\n";
    }
    return out;
}

struct DatasetSpec {
    int count = 20;
    int width = 120;
    int height = 160;
    VesselShape shape = VesselShape::Rectangle;
    /// flat, parabolic, heap, or mixed (alternating flat and parabolic).
    std::string profile = "mixed";
    /// Boundary level as a fraction of vessel height; drawn from [0.3, 0.7] when unset.
    std::optional<double> level;
    double noise = 0.0;
    double texture = 0.0;
    double material = 60.0;
    double air = 200.0;
    MaterialClass material_class = MaterialClass::Liquid;
    std::uint64_t seed = 0;
};

inline ProfileKind parse_profile_kind(const std::string& name)
{
    if (name == "flat") return ProfileKind::Flat;
    if (name == "parabolic") return ProfileKind::Parabolic;
    if (name == "heap") return ProfileKind::Heap;
    throw Error(ErrorCode::InvalidParameter, "unknown profile '" + name + "'");
}

/// Generation parameters of the i-th image of a dataset.
inline std::vector<SynthSpec> dataset_specs(const DatasetSpec& d)
{
    if (d.count <= 0) throw Error(ErrorCode::InvalidParameter, "dataset count must be positive");
    if (d.level && !(*d.level > 0.0 && *d.level < 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "boundary level must lie in (0, 1)");
    }
    if (d.profile != "mixed") parse_profile_kind(d.profile);

    const VesselMask mask(synth_interior(d.width, d.height, d.shape, SynthSpec{}.margin));
    std::mt19937_64 rng(d.seed);
    std::vector<SynthSpec> specs;
    for (int i = 0; i < d.count; ++i) {
        // Uniform in [0.3, 0.7] from the raw 64-bit draw, independent of the
        // standard library's distribution implementation.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double level = d.level.value_or(0.3 + 0.4 * u);
        const ProfileKind kind = d.profile == "mixed" ? (i % 2 == 0 ? ProfileKind::Flat : ProfileKind::Parabolic)
                                                      : parse_profile_kind(d.profile);
        SynthSpec s;
        s.width = d.width;
        s.height = d.height;
        s.shape = d.shape;
        s.profile = make_profile(mask, kind, level);
        s.material = d.material;
        s.air = d.air;
        s.noise_sigma = d.noise;
        s.texture_sigma = d.texture;
        s.seed = rng();
        specs.push_back(std::move(s));
    }
    return specs;
}

/// Writes image, contour and ground-truth files plus `manifest.csv` into `dir`.
inline std::vector<ManifestEntry> write_synthetic_dataset(const fs::path& dir, const DatasetSpec& d)
{
    const std::vector<SynthSpec> specs = dataset_specs(d);
    fs::create_directories(dir);
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const SynthImage img = synth_vessel(specs[i]);
        char stem[32];
        std::snprintf(stem, sizeof stem, "synth_%04zu", i);
        ManifestEntry e;
        e.image = dir / (std::string(stem) + ".png");
        e.contour = dir / (std::string(stem) + "_contour.png");
        e.groundtruth = dir / (std::string(stem) + "_gt.json");
        e.material = d.material_class;
        e.line = static_cast<int>(i) + 2;
        write_png(e.image, to_image(img.image));
        ByteGrid contour = img.contour;
        for (auto& v : contour.values()) v = v ? 255 : 0;
        write_png(e.contour, to_image(contour));
        write_json(e.groundtruth, ground_truth_to_json(img.truth));
        entries.push_back(std::move(e));
    }
    write_text(dir / "manifest.csv", format_manifest(entries, dir));
    return entries;
}

} // namespace vesselcut
