#pragma once

// Command-line front end: segment, sweep, synth.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "vesselcut/cutcost.hpp"
#include "vesselcut/error.hpp"
#include "vesselcut/evalbench.hpp"
#include "vesselcut/json_io.hpp"
#include "vesselcut/png_io.hpp"
#include "vesselcut/segment.hpp"
#include "vesselcut/sweep.hpp"

namespace vesselcut::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSegmentation = 3;

/// Errors that come from the method itself rather than from bad input.
inline int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::OpenContour:
    case ErrorCode::EmptyMask:
    case ErrorCode::BandsOverlap:
    case ErrorCode::NoBoundary: return kExitSegmentation;
    default: return kExitInput;
    }
}

struct CostFlags {
    std::string cost = "exp";
    double sigma = CostParams{}.sigma;
    bool auto_sigma = false;
    double hfactor = CostParams{}.horizontal_factor;
    double penalty_factor = CostParams{}.penalty_factor;
    std::optional<double> penalty_distance;
    double seed_fraction = CostParams{}.seed_fraction;
    bool no_width_norm = false;

    void attach(CLI::App& app)
    {
        app.add_option("--cost", cost, "Edge cost function")->check(CLI::IsMember({"exp", "linear"}));
        app.add_option("--sigma", sigma, "Sigma of the exponential cost (intensity units)");
        app.add_flag("--auto-sigma", auto_sigma, "Use the vessel's intensity standard deviation as sigma");
        app.add_option("--hfactor", hfactor, "Cost multiplier for horizontal neighbor edges");
        app.add_option("--penalty-factor", penalty_factor, "Cost multiplier inside the wall penalty zone");
        app.add_option("--penalty-distance", penalty_distance,
                       "Penalty zone width in pixels [default: max(3, 2% of widest row)]");
        app.add_option("--seed-fraction", seed_fraction, "Height fraction of each seed band");
        app.add_flag("--no-width-norm", no_width_norm, "Do not divide edge costs by the vessel row width");
    }

    [[nodiscard]] CostParams params() const
    {
        CostParams p;
        p.mode = cost == "linear" ? CostMode::Linear : CostMode::Exponential;
        p.sigma = sigma;
        p.auto_sigma = auto_sigma;
        p.horizontal_factor = hfactor;
        p.penalty_factor = penalty_factor;
        p.penalty_distance = penalty_distance;
        p.seed_fraction = seed_fraction;
        p.normalize_width = !no_width_norm;
        p.validate();
        return p;
    }
};

struct SegmentArgs {
    std::string image;
    std::string contour;
    std::string out_dir = ".";
    bool overlay = false;
    bool strict = false;
    CostFlags cost;
};

struct SweepArgs {
    std::string manifest;
    std::vector<double> sigmas;
    bool linear = false;
    bool no_linear = false;
    std::string out_dir = ".";
    int workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    double tol = 0.05;
    CostFlags cost;
};

struct SynthArgs {
    std::string out_dir;
    int count = 20;
    int width = 120;
    int height = 160;
    std::string shape = "rect";
    std::string profile = "mixed";
    std::optional<double> row;
    double noise = 0.0;
    double texture = 0.0;
    double material = 60.0;
    double air = 200.0;
    std::string material_class = "liquid";
    std::uint64_t seed = 0;
};

inline int cmd_segment(const SegmentArgs& args, std::ostream& out)
{
    const CostParams params = args.cost.params();
    const fs::path image_path(args.image);
    const Image8 input = read_png(image_path);
    const GrayImage gray = to_grayscale(input);
    const ByteGrid contour = to_binary(read_png(args.contour));

    const Segmentation s = run_pipeline(gray, contour, params);

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    const std::string stem = image_path.stem().string();
    const fs::path json_path = dir / (stem + ".json");
    write_json(json_path, segmentation_to_json(image_path.filename().string(), s, args.strict));
    out << "fill_fraction " << s.fill_fraction << "\n";
    out << "wrote " << json_path.string() << "\n";
    if (args.overlay) {
        const fs::path overlay_path = dir / (stem + "_overlay.png");
        write_png(overlay_path, render_overlay(input, s.labeling));
        out << "wrote " << overlay_path.string() << "\n";
    }
    return kExitOk;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out)
{
    const CostParams base = args.cost.params();
    const bool explicit_sigmas = !args.sigmas.empty();
    const std::vector<double> sigmas = explicit_sigmas ? args.sigmas : table_sigmas();
    const bool include_linear = args.linear || (!explicit_sigmas && !args.no_linear);

    const auto manifest = read_manifest(args.manifest);
    const SweepReport report =
        sigma_sweep(manifest, sweep_settings(sigmas, include_linear, base), SweepOptions{args.tol, args.workers});

    out << render_table(report);
    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    write_text(dir / "sweep.csv", render_csv(report));
    write_text(dir / "sweep_details.csv", render_details_csv(report));
    return kExitOk;
}

inline int cmd_synth(const SynthArgs& args, std::ostream& out)
{
    DatasetSpec d;
    d.count = args.count;
    d.width = args.width;
    d.height = args.height;
    d.shape = args.shape == "flask" ? VesselShape::Flask : VesselShape::Rectangle;
    d.profile = args.profile;
    d.level = args.row;
    d.noise = args.noise;
    d.texture = args.texture;
    d.material = args.material;
    d.air = args.air;
    d.material_class = args.material_class == "solid" ? MaterialClass::Solid : MaterialClass::Liquid;
    d.seed = args.seed;
    const auto entries = write_synthetic_dataset(args.out_dir, d);
    out << "wrote " << entries.size() << " images and " << (fs::path(args.out_dir) / "manifest.csv").string() << "\n";
    return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Material boundary tracing in transparent vessels by minimum cut"};
    app.name("vesselcut");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    SegmentArgs seg;
    auto* seg_cmd = app.add_subcommand("segment", "Trace the material boundary in one image");
    seg_cmd->add_option("image", seg.image, "Input image (PNG)")->required();
    seg_cmd->add_option("contour", seg.contour, "Vessel contour (PNG, nonzero = contour)")->required();
    seg_cmd->add_option("--out", seg.out_dir, "Output directory");
    seg_cmd->add_flag("--overlay", seg.overlay, "Also write the boundary drawn in red over the input");
    seg_cmd->add_flag("--strict", seg.strict, "Report material component count and seed-band contact");
    seg.cost.attach(*seg_cmd);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Detection rates over a manifest for a range of cost settings");
    sweep_cmd->add_option("manifest", sw.manifest, "CSV manifest: image,contour,groundtruth,class")->required();
    sweep_cmd->add_option("--sigmas", sw.sigmas, "Exponential sigmas [default: 10,20,...,100]")->delimiter(',');
    sweep_cmd->add_flag("--linear", sw.linear, "Add the linear cost row (on by default without --sigmas)");
    sweep_cmd->add_flag("--no-linear", sw.no_linear, "Drop the linear cost row");
    sweep_cmd->add_option("--out", sw.out_dir, "Directory for sweep.csv and sweep_details.csv");
    sweep_cmd->add_option("--workers", sw.workers, "Worker threads")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--tol", sw.tol, "Detection tolerance as a fraction of vessel height");
    sw.cost.attach(*sweep_cmd);

    SynthArgs sy;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset with ground truth and manifest");
    synth_cmd->add_option("--out", sy.out_dir, "Output directory")->required();
    synth_cmd->add_option("--count", sy.count, "Number of images");
    synth_cmd->add_option("--width", sy.width, "Image width");
    synth_cmd->add_option("--height", sy.height, "Image height");
    synth_cmd->add_option("--shape", sy.shape, "Vessel shape")->check(CLI::IsMember({"rect", "flask"}));
    synth_cmd->add_option("--profile", sy.profile, "Boundary profile")
        ->check(CLI::IsMember({"flat", "parabolic", "heap", "mixed"}));
    synth_cmd->add_option("--row", sy.row, "Boundary level as a fraction of vessel height [default: random 0.3-0.7]");
    synth_cmd->add_option("--noise", sy.noise, "Gaussian intensity noise sigma");
    synth_cmd->add_option("--texture", sy.texture, "Extra noise sigma inside the material");
    synth_cmd->add_option("--material", sy.material, "Material intensity");
    synth_cmd->add_option("--air", sy.air, "Air intensity");
    synth_cmd->add_option("--class", sy.material_class, "Class written to the manifest")
        ->check(CLI::IsMember({"liquid", "solid"}));
    synth_cmd->add_option("--seed", sy.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*seg_cmd) return cmd_segment(seg, out);
        if (*sweep_cmd) return cmd_sweep(sw, out);
        return cmd_synth(sy, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

} // namespace vesselcut::cli
