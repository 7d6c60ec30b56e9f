#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "vesselcut/evalbench.hpp"
#include "vesselcut/segment.hpp"

namespace vesselcut {
namespace {

// Whole-image vessel: material (40) from `boundary` down, air (200) above.
GrayImage step_image(int width, int height, int boundary, double material = 40.0, double air = 200.0)
{
    GrayImage img(width, height);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) img(r, c) = r >= boundary ? material : air;
    }
    return img;
}

// Cost of the flat cut between rows k-1 and k, straight from the edge-cost
// formula, for a full rectangular vessel of the given width.
double flat_cut_cost(const GrayImage& img, int k, double sigma, double penalty_distance, double penalty_factor)
{
    const int w = img.width();
    const int h = img.height();
    double total = 0.0;
    for (int c = 0; c < w; ++c) {
        const double diff = img(k - 1, c) - img(k, c);
        double cost = std::exp(-(diff / (2 * sigma)) * (diff / (2 * sigma))) / w;
        auto d = [&](int r) { return std::min({r + 1, h - r, c + 1, w - c}); };
        if (d(k - 1) <= penalty_distance || d(k) <= penalty_distance) cost *= penalty_factor;
        total += cost;
    }
    return total;
}

TEST(Segment, StepImageOracleAndLabels)
{
    const GrayImage img = step_image(100, 100, 60);
    const VesselMask mask(ByteGrid(100, 100, 1));

    // Among flat cuts between the seed bands, row 60 is the unique cheapest.
    double best = std::numeric_limits<double>::infinity();
    int best_row = -1;
    for (int k = 11; k <= 89; ++k) {
        const double cost = flat_cut_cost(img, k, 20.0, 3.0, 3.0);
        if (cost < best) {
            best = cost;
            best_row = k;
        }
    }
    ASSERT_EQ(best_row, 60);

    const PhaseLabeling labels = segment(img, mask, CostParams{});
    for (int r = 0; r < 100; ++r) {
        for (int c = 0; c < 100; ++c) {
            ASSERT_EQ(labels.phase(r, c), r >= 60 ? Phase::Material : Phase::Air) << r << "," << c;
        }
    }
    EXPECT_NEAR(labels.cut_value, best, 1e-12);
    EXPECT_NEAR(labels.induced_cut, labels.cut_value, 1e-9 * labels.cut_value);

    const BoundaryCurve curve = extract_boundary(labels, mask);
    for (const auto& row : curve.top_material_row) {
        ASSERT_TRUE(row.has_value());
        EXPECT_EQ(*row, 60);
    }
    EXPECT_DOUBLE_EQ(fill_level(labels, curve, mask), 0.40);
    EXPECT_EQ(material_components(labels), 1);
}

TEST(Segment, UniformImageRespectsSeeds)
{
    const GrayImage img(40, 50, 90.0);
    const VesselMask mask(ByteGrid(40, 50, 1));
    const PhaseLabeling labels = segment(img, mask, CostParams{});
    const SeedBands seeds = seed_bands(mask, 0.1);
    for (const Pixel& p : seeds.source) EXPECT_EQ(labels.phase(p.row, p.col), Phase::Material);
    for (const Pixel& p : seeds.sink) EXPECT_EQ(labels.phase(p.row, p.col), Phase::Air);
    EXPECT_NEAR(labels.induced_cut, labels.cut_value, 1e-9 * labels.cut_value);
}

TEST(Segment, FillBelowSeedBandIsFlagged)
{
    // Material fills the bottom 5 of 100 rows, inside the 10-row source band.
    const GrayImage img = step_image(60, 100, 95);
    const VesselMask mask(ByteGrid(60, 100, 1));
    const PhaseLabeling labels = segment(img, mask, CostParams{});
    const BoundaryCurve curve = extract_boundary(labels, mask);
    EXPECT_EQ(labels.source_first_row, 90);
    EXPECT_DOUBLE_EQ(source_band_contact(curve, labels), 1.0);

    GroundTruth truth{ColumnRows(60, 95)};
    const DetectionScore score = detection_score(curve, truth, mask, 0.05);
    EXPECT_GE(score.mean_abs_row_error, 5.0);
}

TEST(ExtractBoundary, ColumnRules)
{
    ByteGrid inside(3, 12, 0);
    for (int r = 0; r < 12; ++r) inside(r, 1) = 1;
    inside(5, 0) = 1;
    const VesselMask mask(inside);
    PhaseLabeling labels;
    labels.phase = Grid<Phase>(3, 12, Phase::Outside);
    for (int r = 0; r < 12; ++r) labels.phase(r, 1) = r >= 7 ? Phase::Material : Phase::Air;
    labels.phase(5, 0) = Phase::Material;

    const BoundaryCurve curve = extract_boundary(labels, mask);
    EXPECT_FALSE(curve.top_material_row[0].has_value()); // all material
    ASSERT_TRUE(curve.top_material_row[1].has_value());
    EXPECT_EQ(*curve.top_material_row[1], 7);
    EXPECT_FALSE(curve.top_material_row[2].has_value()); // no vessel
}

TEST(FillLevel, Extremes)
{
    const VesselMask mask(ByteGrid(4, 10, 1));
    PhaseLabeling all;
    all.phase = Grid<Phase>(4, 10, Phase::Material);
    EXPECT_EQ(fill_level(all, extract_boundary(all, mask), mask), 1.0);

    PhaseLabeling band;
    band.phase = Grid<Phase>(4, 10, Phase::Air);
    for (int c = 0; c < 4; ++c) band.phase(9, c) = Phase::Material;
    EXPECT_DOUBLE_EQ(fill_level(band, extract_boundary(band, mask), mask), 0.1);

    PhaseLabeling vertical;
    vertical.phase = Grid<Phase>(4, 10, Phase::Air);
    for (int r = 0; r < 10; ++r) vertical.phase(r, 0) = Phase::Material;
    try {
        (void)fill_level(vertical, extract_boundary(vertical, mask), mask);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoBoundary);
    }
}

SynthImage noisy_sample(std::uint64_t seed, int dx = 0, int dy = 0)
{
    SynthSpec spec;
    spec.width = 70 + dx;
    spec.height = 90 + dy;
    spec.noise_sigma = 15.0;
    spec.seed = seed;
    const VesselMask base(synth_interior(70, 90, spec.shape, spec.margin));
    std::vector<int> profile = make_profile(base, ProfileKind::Parabolic, 0.5);
    std::vector<int> shifted(static_cast<std::size_t>(spec.width), spec.height);
    for (int c = 0; c < 70; ++c) shifted[static_cast<std::size_t>(c)] = profile[static_cast<std::size_t>(c)];
    spec.profile = shifted;
    return synth_vessel(spec);
}

GrayImage to_gray(const ByteGrid& g)
{
    GrayImage out(g.width(), g.height());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i];
    return out;
}

TEST(SegmentProperties, IntensityInversionLeavesLabelsUnchanged)
{
    for (std::uint64_t seed : {1U, 2U, 3U}) {
        const SynthImage s = noisy_sample(seed);
        GrayImage img = to_gray(s.image);
        GrayImage inverted = img;
        for (auto& v : inverted.values()) v = 255.0 - v;
        for (const CostParams& p : {CostParams{}, [] {
                 CostParams q;
                 q.mode = CostMode::Linear;
                 return q;
             }()}) {
            EXPECT_EQ(segment(img, s.mask, p).phase, segment(inverted, s.mask, p).phase);
        }
    }
}

TEST(SegmentProperties, TranslationShiftsBoundary)
{
    const SynthImage s = noisy_sample(11);
    const GrayImage img = to_gray(s.image);
    const int dx = 7;
    const int dy = 4;
    GrayImage moved(img.width() + dx, img.height() + dy, 10.0);
    ByteGrid moved_inside(img.width() + dx, img.height() + dy, 0);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            moved(r + dy, c + dx) = img(r, c);
            moved_inside(r + dy, c + dx) = s.mask.grid()(r, c);
        }
    }
    const VesselMask moved_mask(moved_inside);
    const BoundaryCurve a = extract_boundary(segment(img, s.mask, CostParams{}), s.mask);
    const BoundaryCurve b = extract_boundary(segment(moved, moved_mask, CostParams{}), moved_mask);
    for (int c = 0; c < img.width(); ++c) {
        const auto& ra = a.top_material_row[static_cast<std::size_t>(c)];
        const auto& rb = b.top_material_row[static_cast<std::size_t>(c + dx)];
        ASSERT_EQ(ra.has_value(), rb.has_value());
        if (ra) {
            EXPECT_EQ(*ra + dy, *rb);
        }
    }
}

TEST(SegmentProperties, SeedsHoldEndToEndAndDualityHolds)
{
    for (std::uint64_t seed = 20; seed < 26; ++seed) {
        const SynthImage s = noisy_sample(seed);
        const PhaseLabeling labels = segment(to_gray(s.image), s.mask, CostParams{});
        const SeedBands seeds = seed_bands(s.mask, 0.1);
        for (const Pixel& p : seeds.source) ASSERT_EQ(labels.phase(p.row, p.col), Phase::Material);
        for (const Pixel& p : seeds.sink) ASSERT_EQ(labels.phase(p.row, p.col), Phase::Air);
        EXPECT_NEAR(labels.induced_cut, labels.cut_value, 1e-9 * labels.cut_value);
    }
}

TEST(SegmentProperties, UniformWidthNormalizationKeepsLabels)
{
    for (std::uint64_t seed = 40; seed < 45; ++seed) {
        const SynthImage s = noisy_sample(seed);
        const GrayImage img = to_gray(s.image);
        CostParams off;
        off.normalize_width = false;
        const PhaseLabeling a = segment(img, s.mask, CostParams{});
        const PhaseLabeling b = segment(img, s.mask, off);
        EXPECT_EQ(a.phase, b.phase);
        const double width = s.mask.max_row_width();
        EXPECT_NEAR(a.cut_value, b.cut_value / width, 1e-9 * a.cut_value);
    }
}

TEST(Pipeline, PropagatesContourErrors)
{
    ByteGrid contour(20, 20, 0);
    for (int i = 2; i <= 17; ++i) contour(2, i) = contour(i, 2) = contour(i, 17) = 1; // no bottom
    const GrayImage img(20, 20, 0.0);
    try {
        (void)run_pipeline(img, contour, CostParams{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OpenContour);
    }

    ByteGrid flat(8, 5, 0);
    for (int c = 0; c < 8; ++c) flat(0, c) = flat(4, c) = 1;
    for (int r = 0; r < 5; ++r) flat(r, 0) = flat(r, 7) = 1;
    CostParams wide;
    wide.seed_fraction = 0.45;
    try {
        (void)run_pipeline(GrayImage(8, 5, 0.0), flat, wide);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BandsOverlap);
    }
}

TEST(Overlay, PaintsBoundaryRed)
{
    const GrayImage img = step_image(30, 40, 25);
    const VesselMask mask(ByteGrid(30, 40, 1));
    const PhaseLabeling labels = segment(img, mask, CostParams{});
    Image8 input{30, 40, 1, std::vector<std::uint8_t>(30 * 40, 77)};
    const Image8 out = render_overlay(input, labels);
    ASSERT_EQ(out.channels, 3);
    EXPECT_EQ(out.at(25, 10, 0), 255);
    EXPECT_EQ(out.at(25, 10, 1), 0);
    EXPECT_EQ(out.at(24, 10, 0), 77);
    EXPECT_EQ(out.at(30, 10, 1), 77);
}

TEST(Components, CountsIslands)
{
    PhaseLabeling labels;
    labels.phase = Grid<Phase>(5, 5, Phase::Air);
    labels.phase(0, 0) = Phase::Material;
    labels.phase(4, 4) = Phase::Material;
    labels.phase(4, 3) = Phase::Material;
    EXPECT_EQ(material_components(labels), 2);
}

} // namespace
} // namespace vesselcut
