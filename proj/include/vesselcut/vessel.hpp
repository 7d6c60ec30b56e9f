#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "vesselcut/error.hpp"
#include "vesselcut/grid.hpp"

namespace vesselcut {

struct RowSpan {
    int left = -1;
    int right = -1;
    int count = 0;

    [[nodiscard]] bool empty() const noexcept { return count == 0; }
};

/// Interior pixels of a vessel, with per-row extents.
class VesselMask {
public:
    VesselMask() = default;

    /// Nonzero entries of `inside` are vessel-interior pixels.
    explicit VesselMask(ByteGrid inside) : inside_(std::move(inside))
    {
        for (auto& v : inside_.values()) v = v != 0 ? 1 : 0;
        spans_.resize(static_cast<std::size_t>(inside_.height()));
        for (int r = 0; r < inside_.height(); ++r) {
            RowSpan& span = spans_[static_cast<std::size_t>(r)];
            for (int c = 0; c < inside_.width(); ++c) {
                if (!inside_(r, c)) continue;
                if (span.count == 0) span.left = c;
                span.right = c;
                ++span.count;
            }
            pixel_count_ += static_cast<std::size_t>(span.count);
            if (span.count > 0) {
                if (top_row_ < 0) top_row_ = r;
                bottom_row_ = r;
            }
        }
        if (pixel_count_ == 0) {
            throw Error(ErrorCode::EmptyMask, "vessel mask has no interior pixels");
        }
    }

    [[nodiscard]] int width() const noexcept { return inside_.width(); }
    [[nodiscard]] int height() const noexcept { return inside_.height(); }

    [[nodiscard]] bool inside(int row, int col) const noexcept
    {
        return inside_.contains(row, col) && inside_(row, col) != 0;
    }

    [[nodiscard]] const ByteGrid& grid() const noexcept { return inside_; }
    [[nodiscard]] const RowSpan& row_span(int row) const { return spans_.at(static_cast<std::size_t>(row)); }
    [[nodiscard]] std::size_t pixel_count() const noexcept { return pixel_count_; }

    /// First and last nonempty rows.
    [[nodiscard]] int top_row() const noexcept { return top_row_; }
    [[nodiscard]] int bottom_row() const noexcept { return bottom_row_; }
    [[nodiscard]] int row_extent() const noexcept { return bottom_row_ - top_row_ + 1; }

    [[nodiscard]] int max_row_width() const noexcept
    {
        int w = 0;
        for (const auto& s : spans_) w = std::max(w, s.count);
        return w;
    }

private:
    ByteGrid inside_;
    std::vector<RowSpan> spans_;
    std::size_t pixel_count_ = 0;
    int top_row_ = -1;
    int bottom_row_ = -1;
};

namespace detail {

// Marks every pixel 4-reachable from the image border without crossing a
// nonzero pixel of `wall`.
inline ByteGrid flood_exterior(const ByteGrid& wall)
{
    const int w = wall.width();
    const int h = wall.height();
    ByteGrid seen(w, h, 0);
    std::vector<Pixel> stack;
    auto push = [&](int r, int c) {
        if (!wall.contains(r, c) || wall(r, c) || seen(r, c)) return;
        seen(r, c) = 1;
        stack.push_back({r, c});
    };
    for (int c = 0; c < w; ++c) {
        push(0, c);
        push(h - 1, c);
    }
    for (int r = 0; r < h; ++r) {
        push(r, 0);
        push(r, w - 1);
    }
    while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        push(p.row - 1, p.col);
        push(p.row + 1, p.col);
        push(p.row, p.col - 1);
        push(p.row, p.col + 1);
    }
    return seen;
}

// 3x3 dilation; out-of-image counts as unset.
inline ByteGrid dilate8(const ByteGrid& g)
{
    ByteGrid out(g.width(), g.height(), 0);
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            if (!g(r, c)) continue;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (out.contains(r + dr, c + dc)) out(r + dr, c + dc) = 1;
                }
            }
        }
    }
    return out;
}

// 3x3 erosion; out-of-image counts as unset.
inline ByteGrid erode8(const ByteGrid& g)
{
    ByteGrid out(g.width(), g.height(), 0);
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            bool all = true;
            for (int dr = -1; dr <= 1 && all; ++dr) {
                for (int dc = -1; dc <= 1 && all; ++dc) {
                    all = g.contains(r + dr, c + dc) && g(r + dr, c + dc);
                }
            }
            out(r, c) = all ? 1 : 0;
        }
    }
    return out;
}

inline std::size_t count_set(const ByteGrid& g)
{
    return static_cast<std::size_t>(std::count_if(g.values().begin(), g.values().end(),
                                                   [](std::uint8_t v) { return v != 0; }));
}

} // namespace detail

/// Fills the region enclosed by a binary contour (nonzero = contour pixel).
///
/// Gaps of up to two pixels are bridged by closing the contour with a 3x3
/// dilation, filling, and eroding back. Contour pixels are never inside.
inline VesselMask mask_from_contour(const ByteGrid& contour)
{
    ByteGrid wall(contour.width(), contour.height(), 0);
    for (std::size_t i = 0; i < contour.size(); ++i) wall[i] = contour[i] != 0 ? 1 : 0;
    if (detail::count_set(wall) == 0) {
        throw Error(ErrorCode::EmptyMask, "contour image has no contour pixels");
    }

    const ByteGrid exterior = detail::flood_exterior(wall);
    ByteGrid inside(wall.width(), wall.height(), 0);
    for (std::size_t i = 0; i < wall.size(); ++i) inside[i] = !wall[i] && !exterior[i] ? 1 : 0;
    if (detail::count_set(inside) > 0) return VesselMask(std::move(inside));

    const ByteGrid closed = detail::dilate8(wall);
    const ByteGrid closed_exterior = detail::flood_exterior(closed);
    std::size_t enclosed = 0;
    ByteGrid filled(wall.width(), wall.height(), 0);
    for (std::size_t i = 0; i < wall.size(); ++i) {
        filled[i] = closed_exterior[i] ? 0 : 1;
        if (!closed[i] && !closed_exterior[i]) ++enclosed;
    }
    if (enclosed == 0) {
        throw Error(ErrorCode::OpenContour, "contour does not enclose a region");
    }
    const ByteGrid eroded = detail::erode8(filled);
    for (std::size_t i = 0; i < wall.size(); ++i) inside[i] = eroded[i] && !wall[i] ? 1 : 0;
    return VesselMask(std::move(inside));
}

/// Number of inside pixels per image row.
inline std::vector<int> row_widths(const VesselMask& mask)
{
    std::vector<int> widths(static_cast<std::size_t>(mask.height()));
    for (int r = 0; r < mask.height(); ++r) widths[static_cast<std::size_t>(r)] = mask.row_span(r).count;
    return widths;
}

/// City-block distance from each inside pixel to the nearest pixel that is
/// not inside (pixels beyond the image edge count as not inside). Zero for
/// pixels outside the vessel.
using ContourDistanceField = Grid<int>;

inline ContourDistanceField distance_field(const VesselMask& mask)
{
    const int w = mask.width();
    const int h = mask.height();
    constexpr int kFar = std::numeric_limits<int>::max() / 2;
    ContourDistanceField d(w, h, 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) d(r, c) = mask.inside(r, c) ? kFar : 0;
    }
    // Two-pass chamfer with unit steps is exact for the L1 metric.
    auto at = [&](int r, int c) { return d.contains(r, c) ? d(r, c) : 0; };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (d(r, c) == 0) continue;
            d(r, c) = std::min({d(r, c), at(r - 1, c) + 1, at(r, c - 1) + 1});
        }
    }
    for (int r = h - 1; r >= 0; --r) {
        for (int c = w - 1; c >= 0; --c) {
            if (d(r, c) == 0) continue;
            d(r, c) = std::min({d(r, c), at(r + 1, c) + 1, at(r, c + 1) + 1});
        }
    }
    return d;
}

struct SeedBands {
    std::vector<Pixel> source; // material, bottom band
    std::vector<Pixel> sink;   // air, top band
    int sink_last_row = -1;
    int source_first_row = -1;
};

/// Top and bottom slabs of the vessel, each ceil(fraction * row extent) rows
/// thick (at least one row).
inline SeedBands seed_bands(const VesselMask& mask, double fraction)
{
    if (!(fraction > 0.0 && fraction < 0.5)) {
        throw Error(ErrorCode::InvalidParameter, "seed fraction must lie in (0, 0.5)");
    }
    const int extent = mask.row_extent();
    // The small slack keeps products like 0.1 * 100 from rounding up to 11.
    const int rows = std::max(1, static_cast<int>(std::ceil(fraction * extent - 1e-9)));
    if (2 * rows > extent) {
        throw Error(ErrorCode::BandsOverlap,
                    std::to_string(rows) + "-row seed bands overlap in a vessel of " +
                        std::to_string(extent) + " rows");
    }

    SeedBands bands;
    bands.sink_last_row = mask.top_row() + rows - 1;
    bands.source_first_row = mask.bottom_row() - rows + 1;
    for (int r = mask.top_row(); r <= mask.bottom_row(); ++r) {
        const bool sink = r <= bands.sink_last_row;
        const bool source = r >= bands.source_first_row;
        if (!sink && !source) continue;
        const RowSpan& span = mask.row_span(r);
        if (span.empty()) continue;
        for (int c = span.left; c <= span.right; ++c) {
            if (!mask.inside(r, c)) continue;
            (sink ? bands.sink : bands.source).push_back({r, c});
        }
    }
    return bands;
}

/// Pixels outside the mask that touch it (8-neighborhood): the traced outline.
inline ByteGrid outline(const VesselMask& mask)
{
    ByteGrid out(mask.width(), mask.height(), 0);
    const ByteGrid grown = detail::dilate8(mask.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = grown[i] && !mask.grid()[i] ? 1 : 0;
    return out;
}

} // namespace vesselcut
