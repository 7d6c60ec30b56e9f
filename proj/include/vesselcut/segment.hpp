#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "vesselcut/cutcost.hpp"
#include "vesselcut/error.hpp"
#include "vesselcut/flownet.hpp"
#include "vesselcut/grid.hpp"
#include "vesselcut/vessel.hpp"

namespace vesselcut {

enum class Phase : std::uint8_t { Outside = 0, Material = 1, Air = 2 };

struct PhaseLabeling {
    Grid<Phase> phase;
    /// Max-flow value, i.e. the cost of the chosen cut.
    double cut_value = 0.0;
    /// Capacity of the cut induced by the labels, computed independently.
    double induced_cut = 0.0;
    /// Parameters after image-dependent defaults were resolved.
    CostParams params;
    int sink_last_row = -1;
    int source_first_row = -1;
};

/// Source side of the minimum cut is material, sink side is air.
inline PhaseLabeling segment(const GrayImage& img, const VesselMask& mask, const CostParams& params)
{
    if (!img.same_shape(mask.width(), mask.height())) {
        throw Error(ErrorCode::DimensionMismatch, "image and vessel mask sizes differ");
    }
    const CostParams resolved = resolve_params(params, img, mask);
    const ContourDistanceField dist = distance_field(mask);
    const SeedBands seeds = seed_bands(mask, resolved.seed_fraction);
    const PixelGraph graph = build_graph(img, mask, dist, seeds, resolved);
    const CutLabeling<double> cut = solve(graph.network);

    PhaseLabeling out;
    out.phase = Grid<Phase>(mask.width(), mask.height(), Phase::Outside);
    for (std::size_t node = 0; node < graph.pixel_of.size(); ++node) {
        const Pixel p = graph.pixel_of[node];
        out.phase(p.row, p.col) = cut.labels[node] == Side::Source ? Phase::Material : Phase::Air;
    }
    out.cut_value = cut.flow_value;
    out.induced_cut = cut_capacity(graph.network, std::span<const Side>(cut.labels));
    out.params = resolved;
    out.sink_last_row = seeds.sink_last_row;
    out.source_first_row = seeds.source_first_row;
    return out;
}

struct BoundaryCurve {
    /// Topmost material row per image column; empty where the column has no
    /// vessel pixels or holds only one phase.
    std::vector<std::optional<int>> top_material_row;

    [[nodiscard]] std::size_t defined_columns() const
    {
        std::size_t n = 0;
        for (const auto& r : top_material_row) n += r.has_value() ? 1 : 0;
        return n;
    }
};

inline BoundaryCurve extract_boundary(const PhaseLabeling& labeling, const VesselMask& mask)
{
    const Grid<Phase>& phase = labeling.phase;
    if (!phase.same_shape(mask.width(), mask.height())) {
        throw Error(ErrorCode::DimensionMismatch, "labeling and vessel mask sizes differ");
    }
    BoundaryCurve curve;
    curve.top_material_row.resize(static_cast<std::size_t>(mask.width()));
    for (int c = 0; c < mask.width(); ++c) {
        std::optional<int> top;
        bool air = false;
        for (int r = 0; r < mask.height(); ++r) {
            if (!mask.inside(r, c)) continue;
            if (phase(r, c) == Phase::Material) {
                if (!top) top = r;
            } else {
                air = true;
            }
        }
        if (top && air) curve.top_material_row[static_cast<std::size_t>(c)] = top;
    }
    return curve;
}

/// Share of vessel pixels labeled material.
///
/// Throws NoBoundary when both phases are present yet no column contains
/// both, which only happens for a degenerate, purely vertical cut.
inline double fill_level(const PhaseLabeling& labeling, const BoundaryCurve& curve, const VesselMask& mask)
{
    std::size_t material = 0;
    std::size_t inside = 0;
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (!mask.inside(r, c)) continue;
            ++inside;
            if (labeling.phase(r, c) == Phase::Material) ++material;
        }
    }
    if (material > 0 && material < inside && curve.defined_columns() == 0) {
        throw Error(ErrorCode::NoBoundary, "no column crosses the material boundary");
    }
    return static_cast<double>(material) / static_cast<double>(inside);
}

/// Number of 4-connected material regions. More than one means the cut is
/// physically implausible (e.g. a floating material island).
inline int material_components(const PhaseLabeling& labeling)
{
    const Grid<Phase>& phase = labeling.phase;
    Grid<std::uint8_t> seen(phase.width(), phase.height(), 0);
    std::vector<Pixel> stack;
    int components = 0;
    for (int r = 0; r < phase.height(); ++r) {
        for (int c = 0; c < phase.width(); ++c) {
            if (phase(r, c) != Phase::Material || seen(r, c)) continue;
            ++components;
            seen(r, c) = 1;
            stack.push_back({r, c});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                const Pixel next[] = {{p.row - 1, p.col}, {p.row + 1, p.col}, {p.row, p.col - 1}, {p.row, p.col + 1}};
                for (const Pixel& q : next) {
                    if (!phase.contains(q.row, q.col) || seen(q.row, q.col) || phase(q.row, q.col) != Phase::Material) {
                        continue;
                    }
                    seen(q.row, q.col) = 1;
                    stack.push_back(q);
                }
            }
        }
    }
    return components;
}

/// Fraction of boundary columns whose topmost material pixel sits exactly on
/// the first row of the source seed band. Values near 1 mean the cut was
/// pinned to the seed band, the signature of a vessel filled below it.
inline double source_band_contact(const BoundaryCurve& curve, const PhaseLabeling& labeling)
{
    std::size_t defined = 0;
    std::size_t touching = 0;
    for (const auto& row : curve.top_material_row) {
        if (!row) continue;
        ++defined;
        if (*row == labeling.source_first_row) ++touching;
    }
    return defined == 0 ? 0.0 : static_cast<double>(touching) / static_cast<double>(defined);
}

/// RGB copy of `input` with material pixels that touch air painted red.
inline Image8 render_overlay(const Image8& input, const PhaseLabeling& labeling)
{
    const Grid<Phase>& phase = labeling.phase;
    if (input.width != phase.width() || input.height != phase.height()) {
        throw Error(ErrorCode::DimensionMismatch, "overlay image and labeling sizes differ");
    }
    Image8 out{input.width, input.height, 3, {}};
    out.data.resize(static_cast<std::size_t>(input.width) * static_cast<std::size_t>(input.height) * 3U);
    for (int r = 0; r < input.height; ++r) {
        for (int c = 0; c < input.width; ++c) {
            const std::size_t o = (static_cast<std::size_t>(r) * static_cast<std::size_t>(input.width) +
                                   static_cast<std::size_t>(c)) * 3U;
            for (int k = 0; k < 3; ++k) {
                out.data[o + static_cast<std::size_t>(k)] = input.at(r, c, input.channels >= 3 ? k : 0);
            }
            if (phase(r, c) != Phase::Material) continue;
            const bool edge = (phase.contains(r - 1, c) && phase(r - 1, c) == Phase::Air) ||
                              (phase.contains(r + 1, c) && phase(r + 1, c) == Phase::Air) ||
                              (phase.contains(r, c - 1) && phase(r, c - 1) == Phase::Air) ||
                              (phase.contains(r, c + 1) && phase(r, c + 1) == Phase::Air);
            if (edge) {
                out.data[o] = 255;
                out.data[o + 1] = 0;
                out.data[o + 2] = 0;
            }
        }
    }
    return out;
}

struct Segmentation {
    VesselMask mask;
    PhaseLabeling labeling;
    BoundaryCurve boundary;
    double fill_fraction = 0.0;
};

/// Contour in, boundary out.
inline Segmentation run_pipeline(const GrayImage& img, const ByteGrid& contour, const CostParams& params)
{
    if (!img.same_shape(contour)) {
        throw Error(ErrorCode::DimensionMismatch, "image and contour sizes differ");
    }
    Segmentation s;
    s.mask = mask_from_contour(contour);
    s.labeling = segment(img, s.mask, params);
    s.boundary = extract_boundary(s.labeling, s.mask);
    s.fill_fraction = fill_level(s.labeling, s.boundary, s.mask);
    return s;
}

} // namespace vesselcut
