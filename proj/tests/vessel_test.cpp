#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "vesselcut/evalbench.hpp"
#include "vesselcut/vessel.hpp"

namespace vesselcut {
namespace {

ByteGrid rectangle_contour(int size, int lo, int hi)
{
    ByteGrid g(size, size, 0);
    for (int i = lo; i <= hi; ++i) {
        g(lo, i) = g(hi, i) = 1;
        g(i, lo) = g(i, hi) = 1;
    }
    return g;
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::IoError;
}

TEST(MaskFromContour, FillsRectangle)
{
    const VesselMask mask = mask_from_contour(rectangle_contour(10, 2, 7));
    EXPECT_EQ(mask.pixel_count(), 16U);
    for (int r = 0; r < 10; ++r) {
        for (int c = 0; c < 10; ++c) {
            const bool expected = r >= 3 && r <= 6 && c >= 3 && c <= 6;
            EXPECT_EQ(mask.inside(r, c), expected) << r << "," << c;
        }
    }
    EXPECT_EQ(mask.top_row(), 3);
    EXPECT_EQ(mask.bottom_row(), 6);
}

TEST(MaskFromContour, BridgesSinglePixelGap)
{
    ByteGrid contour = rectangle_contour(20, 2, 17);
    contour(2, 9) = 0;
    const VesselMask mask = mask_from_contour(contour);
    for (int r = 3; r <= 16; ++r) {
        for (int c = 3; c <= 16; ++c) EXPECT_TRUE(mask.inside(r, c)) << r << "," << c;
    }
    EXPECT_FALSE(mask.inside(1, 9));
    EXPECT_FALSE(mask.inside(2, 8));
}

TEST(MaskFromContour, WideGapIsOpen)
{
    ByteGrid contour = rectangle_contour(20, 2, 17);
    for (int c = 7; c <= 10; ++c) contour(2, c) = 0;
    EXPECT_EQ(code_of([&] { (void)mask_from_contour(contour); }), ErrorCode::OpenContour);
}

TEST(MaskFromContour, EmptyImage)
{
    EXPECT_EQ(code_of([] { (void)mask_from_contour(ByteGrid(10, 10, 0)); }), ErrorCode::EmptyMask);
}

TEST(MaskFromContour, OutlineRoundTrip)
{
    for (auto shape : {VesselShape::Rectangle, VesselShape::Flask}) {
        const VesselMask original(synth_interior(90, 120, shape, 5));
        const ByteGrid contour = outline(original);
        const VesselMask filled = mask_from_contour(contour);
        EXPECT_EQ(filled.grid(), original.grid());
        const ByteGrid retraced = outline(filled);
        // every retraced pixel lies within one pixel of an input contour pixel
        for (int r = 0; r < contour.height(); ++r) {
            for (int c = 0; c < contour.width(); ++c) {
                if (!retraced(r, c)) continue;
                bool near = false;
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) near = near || (contour.contains(r + dr, c + dc) && contour(r + dr, c + dc));
                }
                EXPECT_TRUE(near) << r << "," << c;
            }
        }
    }
}

TEST(RowWidths, Rectangle)
{
    const auto widths = row_widths(mask_from_contour(rectangle_contour(10, 2, 7)));
    const std::vector<int> expected{0, 0, 0, 4, 4, 4, 4, 0, 0, 0};
    EXPECT_EQ(widths, expected);
}

TEST(RowWidths, Triangle)
{
    ByteGrid inside(4, 3, 0);
    inside(0, 0) = 1;
    inside(1, 0) = inside(1, 1) = 1;
    inside(2, 0) = inside(2, 1) = inside(2, 2) = 1;
    EXPECT_EQ(row_widths(VesselMask(inside)), (std::vector<int>{1, 2, 3}));
}

TEST(RowWidths, FlaskMatchesPixelCount)
{
    const ByteGrid inside = synth_interior(101, 140, VesselShape::Flask, 4);
    const auto widths = row_widths(VesselMask(inside));
    for (int r = 0; r < inside.height(); ++r) {
        int count = 0;
        for (int c = 0; c < inside.width(); ++c) count += inside(r, c) ? 1 : 0;
        EXPECT_EQ(widths[static_cast<std::size_t>(r)], count) << "row " << r;
    }
}

TEST(DistanceField, AdjacentAndCenter)
{
    ByteGrid contour(7, 9, 0);
    for (int r = 0; r < 9; ++r) contour(r, 0) = contour(r, 6) = 1;
    for (int c = 0; c < 7; ++c) contour(0, c) = contour(8, c) = 1;
    const VesselMask mask = mask_from_contour(contour);
    const auto d = distance_field(mask);
    EXPECT_EQ(d(4, 1), 1);
    EXPECT_EQ(d(4, 3), 3); // 5-wide interior, middle column
    EXPECT_EQ(d(0, 0), 0);
}

TEST(DistanceField, MatchesBruteForceAndIsLipschitz)
{
    std::mt19937 rng(3);
    std::bernoulli_distribution coin(0.8);
    for (int trial = 0; trial < 10; ++trial) {
        ByteGrid inside(23, 17, 0);
        for (auto& v : inside.values()) v = coin(rng) ? 1 : 0;
        inside(5, 5) = 1;
        const VesselMask mask(inside);
        const auto d = distance_field(mask);
        for (int r = 0; r < inside.height(); ++r) {
            for (int c = 0; c < inside.width(); ++c) {
                ASSERT_EQ(d(r, c), testing::brute_l1_distance(inside, r, c)) << r << "," << c;
                if (c + 1 < inside.width()) {
                    ASSERT_LE(std::abs(d(r, c) - d(r, c + 1)), 1);
                }
                if (r + 1 < inside.height()) {
                    ASSERT_LE(std::abs(d(r, c) - d(r + 1, c)), 1);
                }
            }
        }
    }
}

TEST(SeedBands, TenPercentOfHundredRows)
{
    ByteGrid inside(5, 100, 1);
    const SeedBands bands = seed_bands(VesselMask(inside), 0.10);
    EXPECT_EQ(bands.sink_last_row, 9);
    EXPECT_EQ(bands.source_first_row, 90);
    EXPECT_EQ(bands.sink.size(), 50U);
    EXPECT_EQ(bands.source.size(), 50U);
    for (const Pixel& p : bands.sink) EXPECT_LE(p.row, 9);
    for (const Pixel& p : bands.source) EXPECT_GE(p.row, 90);
}

TEST(SeedBands, ShortVesselGetsOneRowEach)
{
    ByteGrid inside(3, 5, 1);
    const SeedBands bands = seed_bands(VesselMask(inside), 0.10);
    EXPECT_EQ(bands.sink_last_row, 0);
    EXPECT_EQ(bands.source_first_row, 4);
}

TEST(SeedBands, OverlapAndRange)
{
    ByteGrid inside(3, 3, 1);
    EXPECT_EQ(code_of([&] { (void)seed_bands(VesselMask(inside), 0.45); }), ErrorCode::BandsOverlap);
    EXPECT_EQ(code_of([&] { (void)seed_bands(VesselMask(inside), 0.5); }), ErrorCode::InvalidParameter);
    EXPECT_EQ(code_of([&] { (void)seed_bands(VesselMask(inside), 0.0); }), ErrorCode::InvalidParameter);
}

TEST(SeedBands, DisjointAndInsideOnIrregularMask)
{
    const VesselMask mask(synth_interior(80, 120, VesselShape::Flask, 3));
    for (double f : {0.05, 0.1, 0.2, 0.33}) {
        const SeedBands bands = seed_bands(mask, f);
        ASSERT_FALSE(bands.source.empty());
        ASSERT_FALSE(bands.sink.empty());
        EXPECT_LT(bands.sink_last_row, bands.source_first_row);
        for (const Pixel& p : bands.source) EXPECT_TRUE(mask.inside(p.row, p.col));
        for (const Pixel& p : bands.sink) EXPECT_TRUE(mask.inside(p.row, p.col));
    }
}

TEST(VesselMask, RejectsEmpty)
{
    EXPECT_EQ(code_of([] { (void)VesselMask(ByteGrid(4, 4, 0)); }), ErrorCode::EmptyMask);
}

} // namespace
} // namespace vesselcut
