#pragma once

// Synthetic vessels with known boundaries, and boundary scoring.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vesselcut/error.hpp"
#include "vesselcut/grid.hpp"
#include "vesselcut/segment.hpp"
#include "vesselcut/vessel.hpp"

namespace vesselcut {

/// One row index per image column; empty where undefined.
using ColumnRows = std::vector<std::optional<int>>;

struct GroundTruth {
    ColumnRows boundary;
};

enum class MaterialClass { Liquid, Solid };

inline std::string to_string(MaterialClass c)
{
    return c == MaterialClass::Liquid ? "liquid" : "solid";
}

enum class VesselShape { Rectangle, Flask };

struct SynthSpec {
    int width = 120;
    int height = 160;
    VesselShape shape = VesselShape::Rectangle;
    /// Rows/columns between the image border and the contour.
    int margin = 6;
    /// Topmost material row per column (size == width). Columns outside the
    /// vessel are ignored.
    std::vector<int> profile;
    double material = 60.0;
    double air = 200.0;
    double background = 10.0;
    double glass = 150.0;
    /// Gaussian noise over the whole image.
    double noise_sigma = 0.0;
    /// Extra Gaussian noise on material pixels only.
    double texture_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SynthImage {
    ByteGrid image;
    ByteGrid contour;
    VesselMask mask;
    GroundTruth truth;
};

/// Interior pixels of the requested vessel geometry.
inline ByteGrid synth_interior(int width, int height, VesselShape shape, int margin)
{
    if (width < 2 * margin + 5 || height < 2 * margin + 5 || margin < 1) {
        throw Error(ErrorCode::InvalidParameter, "vessel geometry too small for the image");
    }
    ByteGrid inside(width, height, 0);
    const int top = margin + 1;
    const int bottom = height - margin - 2;
    const int left = margin + 1;
    const int right = width - margin - 2;
    if (shape == VesselShape::Rectangle) {
        for (int r = top; r <= bottom; ++r) {
            for (int c = left; c <= right; ++c) inside(r, c) = 1;
        }
        return inside;
    }

    // Round-bottom flask: straight neck over the top 30%, circular-ish body below.
    const double center = 0.5 * (left + right);
    const double half = 0.5 * (right - left);
    const double neck = std::max(1.0, 0.25 * half);
    const double extent = bottom - top;
    for (int r = top; r <= bottom; ++r) {
        const double t = (r - top) / extent;
        const double z = (t - 0.63) / 0.38;
        const double body = half * std::sqrt(std::max(0.0, 1.0 - z * z));
        const double hw = t < 0.3 ? neck : std::max(neck, body);
        for (int c = left; c <= right; ++c) {
            if (std::abs(c - center) <= hw) inside(r, c) = 1;
        }
    }
    return inside;
}

enum class ProfileKind { Flat, Parabolic, Heap };

/// Boundary profile over the vessel columns. `level` is the base boundary
/// position as a fraction of the vessel's row extent, measured from its top.
/// Parabolic rises toward the walls (meniscus); Heap rises toward the middle.
inline std::vector<int> make_profile(const VesselMask& mask, ProfileKind kind, double level, double rise_fraction = 0.08)
{
    if (!(level >= 0.0 && level <= 1.0)) throw Error(ErrorCode::InvalidProfile, "level must lie in [0, 1]");
    int left = mask.width();
    int right = -1;
    for (int r = mask.top_row(); r <= mask.bottom_row(); ++r) {
        const RowSpan& s = mask.row_span(r);
        if (s.empty()) continue;
        left = std::min(left, s.left);
        right = std::max(right, s.right);
    }
    const double center = 0.5 * (left + right);
    const double half = std::max(1.0, 0.5 * (right - left));
    const double extent = mask.row_extent();
    const double base = mask.top_row() + level * extent;
    const double rise = rise_fraction * extent;

    std::vector<int> profile(static_cast<std::size_t>(mask.width()), mask.height());
    for (int c = left; c <= right; ++c) {
        const double u = (c - center) / half;
        double row = base;
        if (kind == ProfileKind::Parabolic) row = base - rise * u * u;
        if (kind == ProfileKind::Heap) row = base - rise * (1.0 - u * u);
        profile[static_cast<std::size_t>(c)] = static_cast<int>(std::lround(row));
    }
    return profile;
}

namespace detail {

inline std::uint8_t to_byte(double v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

} // namespace detail

/// Renders a vessel filled up to `spec.profile`. Deterministic in `spec.seed`.
///
/// Ground truth for a column is its profile row when the column holds both
/// phases, and empty otherwise.
inline SynthImage synth_vessel(const SynthSpec& spec)
{
    if (spec.profile.size() != static_cast<std::size_t>(spec.width)) {
        throw Error(ErrorCode::InvalidProfile, "profile needs one row per image column");
    }
    if (spec.noise_sigma < 0.0 || spec.texture_sigma < 0.0) {
        throw Error(ErrorCode::InvalidParameter, "noise levels must be >= 0");
    }

    SynthImage out;
    out.mask = VesselMask(synth_interior(spec.width, spec.height, spec.shape, spec.margin));
    out.contour = outline(out.mask);
    out.truth.boundary.assign(static_cast<std::size_t>(spec.width), std::nullopt);

    for (int c = 0; c < spec.width; ++c) {
        int top = -1;
        int bottom = -1;
        for (int r = 0; r < spec.height; ++r) {
            if (!out.mask.inside(r, c)) continue;
            if (top < 0) top = r;
            bottom = r;
        }
        if (top < 0) continue;
        const int row = spec.profile[static_cast<std::size_t>(c)];
        if (row < 0 || row >= spec.height) {
            throw Error(ErrorCode::InvalidProfile, "profile row out of image at column " + std::to_string(c));
        }
        if (row > top && row <= bottom) out.truth.boundary[static_cast<std::size_t>(c)] = row;
    }
    bool any = false;
    for (const auto& r : out.truth.boundary) any = any || r.has_value();
    if (!any) throw Error(ErrorCode::InvalidProfile, "profile does not cross the vessel interior");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    out.image = ByteGrid(spec.width, spec.height, 0);
    for (int r = 0; r < spec.height; ++r) {
        for (int c = 0; c < spec.width; ++c) {
            double v = spec.background;
            bool material = false;
            if (out.contour(r, c)) {
                v = spec.glass;
            } else if (out.mask.inside(r, c)) {
                material = r >= spec.profile[static_cast<std::size_t>(c)];
                v = material ? spec.material : spec.air;
            }
            // Draws happen for every pixel so the stream does not depend on geometry.
            const double n0 = gauss(rng);
            const double n1 = gauss(rng);
            v += spec.noise_sigma * n0;
            if (material) v += spec.texture_sigma * n1;
            out.image(r, c) = detail::to_byte(v);
        }
    }
    return out;
}

struct DetectionScore {
    bool detected = false;
    double mean_abs_row_error = 0.0;
    std::size_t columns = 0;
};

/// Mean absolute row difference over the columns where both are defined.
inline double mean_abs_row_error(const ColumnRows& a, const ColumnRows& b, std::size_t* columns = nullptr)
{
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "column counts differ");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        if (!a[c] || !b[c]) continue;
        sum += std::abs(*a[c] - *b[c]);
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::NoOverlap, "no column has both a prediction and a ground truth");
    if (columns) *columns = n;
    return sum / static_cast<double>(n);
}

/// Detected iff the mean absolute row error is within tol_fraction of the
/// vessel's row extent.
inline DetectionScore detection_score(const ColumnRows& predicted, const ColumnRows& truth, const VesselMask& mask,
                                      double tol_fraction = 0.05)
{
    DetectionScore s;
    s.mean_abs_row_error = mean_abs_row_error(predicted, truth, &s.columns);
    s.detected = s.mean_abs_row_error <= tol_fraction * mask.row_extent();
    return s;
}

inline DetectionScore detection_score(const BoundaryCurve& predicted, const GroundTruth& truth, const VesselMask& mask,
                                      double tol_fraction = 0.05)
{
    return detection_score(predicted.top_material_row, truth.boundary, mask, tol_fraction);
}

} // namespace vesselcut
