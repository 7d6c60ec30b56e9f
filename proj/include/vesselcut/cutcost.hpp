#pragma once

// Edge-cost construction: turns an intensity image restricted to a vessel
// mask into a flow network whose minimum cut is the material boundary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vesselcut/error.hpp"
#include "vesselcut/flownet.hpp"
#include "vesselcut/grid.hpp"
#include "vesselcut/vessel.hpp"

namespace vesselcut {

using GrayImage = Grid<double>;

enum class CostMode { Linear, Exponential };

inline std::string to_string(CostMode mode)
{
    return mode == CostMode::Linear ? "linear" : "exp";
}

struct CostParams {
    CostMode mode = CostMode::Exponential;
    double sigma = 20.0;
    double horizontal_factor = 1.3;
    double penalty_factor = 3.0;
    /// Unset means max(3, 2% of the widest vessel row).
    std::optional<double> penalty_distance;
    double seed_fraction = 0.10;
    bool normalize_width = true;
    /// Replace sigma by the intensity standard deviation inside the vessel.
    bool auto_sigma = false;

    void validate() const
    {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::InvalidParameter, "sigma must be > 0");
        if (!(horizontal_factor >= 1.0)) throw Error(ErrorCode::InvalidParameter, "horizontal factor must be >= 1");
        if (!(penalty_factor >= 1.0)) throw Error(ErrorCode::InvalidParameter, "penalty factor must be >= 1");
        if (penalty_distance && !(*penalty_distance >= 0.0)) {
            throw Error(ErrorCode::InvalidParameter, "penalty distance must be >= 0");
        }
        if (!(seed_fraction > 0.0 && seed_fraction < 0.5)) {
            throw Error(ErrorCode::InvalidParameter, "seed fraction must lie in (0, 0.5)");
        }
    }
};

inline double default_penalty_distance(const VesselMask& mask)
{
    return std::max(3.0, 0.02 * mask.max_row_width());
}

/// Population standard deviation of intensity over the vessel interior.
inline double interior_sigma(const GrayImage& img, const VesselMask& mask)
{
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (!mask.inside(r, c)) continue;
            sum += img(r, c);
            sum_sq += img(r, c) * img(r, c);
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean));
}

/// Parameters with every image-dependent default filled in.
inline CostParams resolve_params(const CostParams& params, const GrayImage& img, const VesselMask& mask)
{
    params.validate();
    CostParams out = params;
    if (!out.penalty_distance) out.penalty_distance = default_penalty_distance(mask);
    if (out.auto_sigma) {
        const double s = interior_sigma(img, mask);
        // A flat image has no spread to measure; keep the configured value.
        if (s > 0.0) out.sigma = s;
        out.auto_sigma = false;
    }
    return out;
}

/// Luma (0.299 R + 0.587 G + 0.114 B) kept as a real value. Gray inputs pass
/// through; alpha channels are ignored.
inline GrayImage to_grayscale(const Image8& src)
{
    if (src.width <= 0 || src.height <= 0 || src.channels < 1 || src.channels > 4 ||
        src.data.size() != static_cast<std::size_t>(src.width) * static_cast<std::size_t>(src.height) *
                               static_cast<std::size_t>(src.channels)) {
        throw Error(ErrorCode::UnsupportedFormat,
                    "expected 8-bit image with 1-4 channels, got " + std::to_string(src.channels));
    }
    GrayImage out(src.width, src.height);
    for (int r = 0; r < src.height; ++r) {
        for (int c = 0; c < src.width; ++c) {
            if (src.channels <= 2) {
                out(r, c) = src.at(r, c, 0);
            } else {
                out(r, c) = 0.299 * src.at(r, c, 0) + 0.587 * src.at(r, c, 1) + 0.114 * src.at(r, c, 2);
            }
        }
    }
    return out;
}

/// Similarity of two neighboring intensities, in [0, 1] and decreasing in
/// their difference.
///
/// Exponential: exp(-(|a - b| / (2 sigma))^2).
/// Linear: 1 - |a - b| / 255, the nonnegative shift of -|a - b|.
inline double pair_cost(double a, double b, const CostParams& params)
{
    const double diff = std::abs(a - b);
    if (params.mode == CostMode::Linear) {
        return std::max(0.0, 1.0 - diff / 255.0);
    }
    const double z = diff / (2.0 * params.sigma);
    return std::exp(-z * z);
}

struct PixelGraph {
    FlowNetwork<double> network;
    /// Node id per pixel, -1 outside the vessel.
    Grid<int> node_of;
    std::vector<Pixel> pixel_of;
};

/// One node per inside pixel (row-major order), one symmetric arc per
/// 4-adjacent inside pair, infinite terminal arcs on the seed bands.
///
/// Arc weight = pair_cost / row width term, times horizontal_factor on
/// horizontal neighbors, times penalty_factor when either end lies within
/// penalty_distance of the contour. The row width term of a vertical arc is
/// the mean width of its two rows.
inline PixelGraph build_graph(const GrayImage& img, const VesselMask& mask, const ContourDistanceField& dist,
                              const SeedBands& seeds, const CostParams& params)
{
    if (!img.same_shape(mask.width(), mask.height()) || !dist.same_shape(mask.width(), mask.height())) {
        throw Error(ErrorCode::DimensionMismatch, "image, mask and distance field sizes differ");
    }
    params.validate();
    const double penalty_distance = params.penalty_distance.value_or(default_penalty_distance(mask));

    PixelGraph g;
    g.node_of = Grid<int>(mask.width(), mask.height(), -1);
    g.pixel_of.reserve(mask.pixel_count());
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (!mask.inside(r, c)) continue;
            g.node_of(r, c) = static_cast<int>(g.pixel_of.size());
            g.pixel_of.push_back({r, c});
        }
    }
    g.network = FlowNetwork<double>(static_cast<int>(g.pixel_of.size()));
    g.network.reserve_arcs(2 * g.pixel_of.size());

    auto width_of = [&](int row) { return static_cast<double>(mask.row_span(row).count); };
    auto penalized = [&](int r0, int c0, int r1, int c1) {
        return dist(r0, c0) <= penalty_distance || dist(r1, c1) <= penalty_distance;
    };

    for (const Pixel& p : g.pixel_of) {
        const int r = p.row;
        const int c = p.col;
        if (mask.inside(r, c + 1)) {
            double w = pair_cost(img(r, c), img(r, c + 1), params);
            if (params.normalize_width) w /= width_of(r);
            w *= params.horizontal_factor;
            if (penalized(r, c, r, c + 1)) w *= params.penalty_factor;
            g.network.add_edge(g.node_of(r, c), g.node_of(r, c + 1), w, w);
        }
        if (mask.inside(r + 1, c)) {
            double w = pair_cost(img(r, c), img(r + 1, c), params);
            if (params.normalize_width) w /= 0.5 * (width_of(r) + width_of(r + 1));
            if (penalized(r, c, r + 1, c)) w *= params.penalty_factor;
            g.network.add_edge(g.node_of(r, c), g.node_of(r + 1, c), w, w);
        }
    }

    auto node_for_seed = [&](const Pixel& p) {
        const int node = g.node_of.contains(p.row, p.col) ? g.node_of(p.row, p.col) : -1;
        if (node < 0) throw Error(ErrorCode::DimensionMismatch, "seed pixel lies outside the vessel mask");
        return node;
    };
    for (const Pixel& p : seeds.source) g.network.set_terminal(node_for_seed(p), kInfinite, 0.0);
    for (const Pixel& p : seeds.sink) g.network.set_terminal(node_for_seed(p), 0.0, kInfinite);
    return g;
}

} // namespace vesselcut
