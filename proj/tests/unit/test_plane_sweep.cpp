// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/error.hpp"
#include "prosplat/plane_sweep.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace prosplat {
namespace {

using testing::look_at_camera;
using testing::random_vec;

CameraView shifted(const CameraIntrinsics &k, const Vec3 &centre) {
    return CameraView(k, CameraExtrinsics(Mat3::Identity(), -centre), 0.5, 50.0);
}

FeatureGrid smooth_grid(int h, int w, int c) {
    FeatureGrid g(h, w, c);
    for (int r = 0; r < h; ++r) {
        for (int col = 0; col < w; ++col) {
            for (int ch = 0; ch < c; ++ch) g.at(r, col, ch) = std::sin(0.3 * col + 0.2 * r + ch) + 0.1 * ch;
        }
    }
    return g;
}

// Bilinear read at continuous cell coordinates, zero outside the grid.
double bilinear_oracle(const FeatureGrid &g, double col, double row, int ch) {
    const int c0 = static_cast<int>(std::floor(col)), r0 = static_cast<int>(std::floor(row));
    const double fc = col - c0, fr = row - r0;
    auto tap = [&](int r, int c) { return (r < 0 || c < 0 || r >= g.h || c >= g.w) ? 0.0 : g.at(r, c, ch); };
    return (1 - fr) * ((1 - fc) * tap(r0, c0) + fc * tap(r0, c0 + 1)) +
           fr * ((1 - fc) * tap(r0 + 1, c0) + fc * tap(r0 + 1, c0 + 1));
}

TEST(DepthCandidates, ClosedForms) {
    EXPECT_EQ(sample_depth_candidates(1, 4, 2), (std::vector<double>{1, 4}));
    const auto three = sample_depth_candidates(1, 4, 3);
    ASSERT_EQ(three.size(), 3u);
    EXPECT_EQ(three[0], 1.0);
    EXPECT_NEAR(three[1], 1.6, 1e-15);
    EXPECT_EQ(three[2], 4.0);
    const auto linear = sample_depth_candidates(1, 4, 3, DepthSpacing::Linear);
    EXPECT_NEAR(linear[1], 2.5, 1e-15);
    EXPECT_EQ(sample_depth_candidates(2, 9, 1), (std::vector<double>{2}));
}

TEST(DepthCandidates, StrictlyIncreasingWithExactEndpoints) {
    const auto d = sample_depth_candidates(0.3, 120.0, 64);
    EXPECT_EQ(d.front(), 0.3);
    EXPECT_EQ(d.back(), 120.0);
    for (std::size_t i = 1; i < d.size(); ++i) {
        EXPECT_LT(d[i - 1], d[i]);
        if (i + 1 < d.size()) EXPECT_NEAR(1 / d[i - 1] - 1 / d[i], 1 / d[i] - 1 / d[i + 1], 1e-12);
    }
}

TEST(DepthCandidates, InvalidRanges) {
    for (auto [n, f, count] : {std::tuple{1.0, 1.0, 3}, std::tuple{0.0, 2.0, 3}, std::tuple{3.0, 2.0, 3},
                               std::tuple{1.0, 2.0, 0}}) {
        try {
            sample_depth_candidates(n, f, count);
            ADD_FAILURE() << n << " " << f << " " << count;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidRange);
        }
    }
}

TEST(Warp, SelfWarpIsIdentity) {
    SeededStream rng(3);
    const CameraView cam = look_at_camera(rng, Vec3(0, 0, -4), Vec3::Zero(), 40, 30);
    const FeatureGrid src = smooth_grid(30, 40, 3);
    for (double depth : {0.5, 2.0, 17.0}) {
        const WarpedFeature out = warp_feature(src, cam, cam, depth);
        for (std::size_t i = 0; i < src.data.size(); ++i) EXPECT_NEAR(out.features.data[i], src.data[i], 1e-6);
        for (auto v : out.valid) EXPECT_EQ(v, 1);
    }
}

TEST(Warp, PureTranslationShiftsByDisparity) {
    const CameraIntrinsics k(40, 40, 20, 8, 40, 16);
    const double tx = 0.5, depth = 8.0; // shift f tx / d = 2.5 pixels
    const CameraView dst = shifted(k, Vec3::Zero());
    const CameraView src = shifted(k, Vec3(tx, 0, 0));
    FeatureGrid ramp(16, 40, 1);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 40; ++c) ramp.at(r, c, 0) = c;
    }
    const WarpedFeature out = warp_feature(ramp, src, dst, depth);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 40; ++c) {
            const bool valid = out.valid[r * 40 + c] != 0;
            EXPECT_EQ(valid, c >= 2) << c;
            if (c >= 3) EXPECT_NEAR(out.features.at(r, c, 0), c - 2.5, 1e-9);
        }
    }
}

TEST(Warp, MatchesPointwiseBackProjection) {
    SeededStream rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const CameraView dst = look_at_camera(rng, random_vec(rng, -1, 1) + Vec3(0, 0, -5), Vec3::Zero(), 64, 48);
        const CameraView src = look_at_camera(rng, random_vec(rng, -1, 1) + Vec3(0, 0, -5), Vec3::Zero(), 64, 48);
        const FeatureGrid feat = smooth_grid(12, 16, 2); // 4x coarser than the image
        const double depth = rng.uniform(3, 7);
        const GridSize dst_grid{6, 8};
        const WarpedFeature out = warp_feature(feat, src, dst, depth, dst_grid);
        const auto &kd = dst.intrinsics();
        const auto &ks = src.intrinsics();
        for (int r = 0; r < dst_grid.h; ++r) {
            for (int c = 0; c < dst_grid.w; ++c) {
                const double u = (c + 0.5) * 64 / 8, v = (r + 0.5) * 48 / 6;
                const Vec3 cam_pt(depth * (u - kd.cx()) / kd.fx(), depth * (v - kd.cy()) / kd.fy(), depth);
                const Vec3 world =
                    dst.extrinsics().rotation().transpose() * (cam_pt - dst.extrinsics().translation());
                const Vec2 px = testing::project_world(src, world);
                const double gx = px.x() * 16 / ks.width(), gy = px.y() * 12 / ks.height();
                const int p = r * dst_grid.w + c;
                EXPECT_EQ(out.valid[p] != 0, gx >= 0 && gx < 16 && gy >= 0 && gy < 12);
                for (int ch = 0; ch < 2; ++ch) {
                    EXPECT_NEAR(out.features.at(r, c, ch), bilinear_oracle(feat, gx - 0.5, gy - 0.5, ch), 1e-6);
                }
            }
        }
    }
}

TEST(Warp, PointsBehindSourceAreInvalid) {
    const CameraIntrinsics k(10, 10, 4, 4, 8, 8);
    const CameraView dst = shifted(k, Vec3::Zero());
    // Source camera sits beyond the plane, facing the same way.
    const CameraView src = shifted(k, Vec3(0, 0, 10));
    const WarpedFeature out = warp_feature(smooth_grid(8, 8, 1), src, dst, 2.0);
    for (auto v : out.valid) EXPECT_EQ(v, 0);
    for (double x : out.features.data) EXPECT_EQ(x, 0.0);
}

TEST(CostVolume, ZeroReferenceGivesZeroCost) {
    SeededStream rng(5);
    const CameraView a = look_at_camera(rng, Vec3(-0.3, 0, -4), Vec3::Zero(), 16, 12);
    const CameraView b = look_at_camera(rng, Vec3(0.3, 0, -4), Vec3::Zero(), 16, 12);
    const FeatureGrid zero(12, 16, 4);
    const std::vector<FeatureGrid> others = {smooth_grid(12, 16, 4)};
    const std::vector<CameraView> views = {b};
    const auto depths = sample_depth_candidates(1, 10, 8);
    const CostVolume vol = build_cost_volume(zero, a, others, views, depths);
    ASSERT_EQ(vol.values.size(), static_cast<std::size_t>(12 * 16 * 8));
    for (double v : vol.values) EXPECT_EQ(v, 0.0);
}

TEST(CostVolume, TwoViewsAverageSingleViewVolumes) {
    SeededStream rng(6);
    const CameraView ref = look_at_camera(rng, Vec3(0, 0, -4), Vec3::Zero(), 16, 12);
    const std::vector<CameraView> views = {look_at_camera(rng, Vec3(-0.5, 0.1, -4), Vec3::Zero(), 16, 12),
                                           look_at_camera(rng, Vec3(0.6, -0.2, -4), Vec3::Zero(), 16, 12)};
    const FeatureGrid rf = smooth_grid(12, 16, 3);
    std::vector<FeatureGrid> others = {smooth_grid(12, 16, 3), smooth_grid(12, 16, 3)};
    for (double &x : others[1].data) x = std::cos(3 * x);
    const auto depths = sample_depth_candidates(2, 8, 5);
    const CostVolume both = build_cost_volume(rf, ref, others, views, depths);
    const CostVolume v0 = build_cost_volume(rf, ref, std::span(others).first(1), std::span(views).first(1), depths);
    const CostVolume v1 = build_cost_volume(rf, ref, std::span(others).last(1), std::span(views).last(1), depths);
    for (std::size_t i = 0; i < both.values.size(); ++i) {
        EXPECT_NEAR(both.values[i], 0.5 * (v0.values[i] + v1.values[i]), 1e-12);
        EXPECT_EQ(both.valid[i], v0.valid[i] && v1.valid[i]);
    }
}

TEST(CostVolume, ValuesAreChannelNormalisedDotProducts) {
    const CameraIntrinsics k(20, 20, 4, 4, 8, 8);
    const CameraView cam = shifted(k, Vec3::Zero());
    const FeatureGrid f = smooth_grid(8, 8, 5);
    const std::vector<FeatureGrid> others = {f};
    const std::vector<CameraView> views = {cam};
    const std::vector<double> depths = {3.0};
    const CostVolume vol = build_cost_volume(f, cam, others, views, depths);
    for (int p = 0; p < 64; ++p) {
        double dot = 0;
        for (double x : f.cell(p)) dot += x * x;
        EXPECT_NEAR(vol.at(p, 0), dot / 5, 1e-6);
    }
}

TEST(CostVolume, ShapeAndArgumentErrors) {
    const CameraIntrinsics k(20, 20, 4, 4, 8, 8);
    const CameraView cam = shifted(k, Vec3::Zero());
    const FeatureGrid f = smooth_grid(8, 8, 2);
    const std::vector<double> depths = {3.0};
    auto expect_code = [](ErrorCode code, auto &&fn) {
        try {
            fn();
            ADD_FAILURE() << "expected " << to_string(code);
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), code);
        }
    };
    const std::vector<CameraView> one_view = {cam};
    const std::vector<FeatureGrid> wrong_channels = {smooth_grid(8, 8, 3)};
    expect_code(ErrorCode::ShapeMismatch, [&] { build_cost_volume(f, cam, wrong_channels, one_view, depths); });
    const std::vector<FeatureGrid> wrong_size = {smooth_grid(8, 4, 2)};
    expect_code(ErrorCode::ShapeMismatch, [&] { build_cost_volume(f, cam, wrong_size, one_view, depths); });
    const std::vector<FeatureGrid> two = {f, f};
    expect_code(ErrorCode::ShapeMismatch, [&] { build_cost_volume(f, cam, two, one_view, depths); });
}

TEST(CostVolume, RecoversTexturedPlaneDepth) {
    SeededStream rng(2718);
    const CameraIntrinsics k(60, 60, 32, 24, 64, 48);
    const auto depths = sample_depth_candidates(1.0, 10.0, 32);
    const int true_index = 13;
    const double plane = depths[true_index];
    const testing::PlaneTexture texture(rng, 4, 0.15 * plane, 0.3 * plane);
    const CameraView ref = shifted(k, Vec3::Zero());
    const std::vector<CameraView> views = {shifted(k, Vec3(0.35, 0.05, 0))};
    const std::vector<FeatureGrid> others = {texture.render(views[0], plane)};
    const CostVolume vol = build_cost_volume(texture.render(ref, plane), ref, others, views, depths);
    EXPECT_GE(testing::argmax_hit_rate(vol, true_index), 0.95);
}

} // namespace
} // namespace prosplat
