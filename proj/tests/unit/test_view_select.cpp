// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/error.hpp"
#include "prosplat/view_select.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

namespace prosplat {
namespace {

using testing::random_rotation;
using testing::random_vec;

CameraView at(const Vec3 &centre, const Mat3 &r = Mat3::Identity()) {
    return CameraView(CameraIntrinsics(100, 100, 32, 24, 64, 48), CameraExtrinsics(r, -r * centre), 0.1, 100.0);
}

Mat3 yaw(double radians) { return Eigen::AngleAxisd(radians, Vec3::UnitY()).toRotationMatrix(); }

TEST(OverlapScore, IdenticalViewsSaturate) {
    const CameraView cam = at(Vec3(1, 2, 3), yaw(0.4));
    const OverlapScore s = overlap_score(cam, cam);
    EXPECT_EQ(s.dist, 0.0);
    EXPECT_NEAR(s.angle, 1.0, 1e-15);
    EXPECT_NEAR(s.score, 1.0 / kOverlapDistanceEpsilon + 1.0, 1e-6);
}

TEST(OverlapScore, OppositeDirectionHasNoAngularTerm) {
    const CameraView a = at(Vec3(0, 0, 0));
    const CameraView b = at(Vec3(0, 0, 0), yaw(3.14159265358979323846));
    const OverlapScore s = overlap_score(a, b);
    EXPECT_NEAR(s.angle, -1.0, 1e-15);
    EXPECT_NEAR(s.score, 1.0 / kOverlapDistanceEpsilon, 1e-6);
}

TEST(OverlapScore, DistanceArithmetic) {
    const CameraView tgt = at(Vec3::Zero());
    const std::vector<CameraView> inputs = {at(Vec3(1, 0, 0)), at(Vec3(0, 2, 0))};
    const auto scores = overlap_scores(tgt, inputs);
    EXPECT_DOUBLE_EQ(scores[0].score, 2.0);
    EXPECT_DOUBLE_EQ(scores[1].score, 1.5);
    EXPECT_EQ(scores[1].view_index, 1);
    const auto pick = select_reference(tgt, inputs);
    EXPECT_EQ(pick.view_index, 0);
    EXPECT_DOUBLE_EQ(pick.score.score, 2.0);
}

TEST(OverlapScore, ViewingAxisComesFromCameraToWorldRotation) {
    // World-to-camera rotation whose third row and third column differ.
    const Mat3 r = Eigen::AngleAxisd(0.7, Vec3(1, 1, 0).normalized()).toRotationMatrix();
    const CameraView a = at(Vec3::Zero());
    const CameraView b = at(Vec3(1, 0, 0), r);
    const Vec3 axis_world = r.transpose().col(2);
    EXPECT_NEAR(overlap_score(a, b).angle, Vec3::UnitZ().dot(axis_world), 1e-15);
    OverlapOptions literal;
    literal.camera_to_world_axis = false;
    EXPECT_NEAR(overlap_score(a, b, literal).angle, Vec3::UnitZ().dot(r.col(2)), 1e-15);
}

TEST(OverlapScore, RawTranslationOptionUsesStoredVectors) {
    const Mat3 r = yaw(1.0);
    const CameraView a = at(Vec3(0, 0, 0));
    const CameraView b = at(Vec3(2, 0, 0), r);
    OverlapOptions raw;
    raw.use_camera_centers = false;
    EXPECT_NEAR(overlap_score(a, b, raw).dist, b.extrinsics().translation().norm(), 1e-15);
    EXPECT_NEAR(overlap_score(a, b).dist, 2.0, 1e-15);
}

TEST(SelectReference, SingleAndEmpty) {
    const CameraView tgt = at(Vec3::Zero());
    const std::vector<CameraView> one = {at(Vec3(5, 5, 5), yaw(2.0))};
    EXPECT_EQ(select_reference(tgt, one).view_index, 0);
    try {
        select_reference(tgt, std::span<const CameraView>{});
        FAIL() << "expected EmptyInputSet";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyInputSet);
    }
}

TEST(SelectReference, TiesResolveToLowestIndex) {
    const CameraView tgt = at(Vec3::Zero());
    const std::vector<CameraView> inputs = {at(Vec3(0, 0, 3)), at(Vec3(-1, 0, 0)), at(Vec3(1, 0, 0))};
    EXPECT_EQ(select_reference(tgt, inputs).view_index, 1);
}

TEST(SelectReference, MatchesExhaustiveEnumeration) {
    SeededStream rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const CameraView tgt = at(random_vec(rng, -3, 3), random_rotation(rng));
        std::vector<CameraView> inputs;
        const int n = 1 + static_cast<int>(rng.next() % 6);
        for (int k = 0; k < n; ++k) inputs.push_back(at(random_vec(rng, -3, 3), random_rotation(rng)));
        // Hand-evaluated scores from camera centres and world viewing axes.
        const Vec3 ct = camera_center(tgt.extrinsics());
        const Vec3 zt = tgt.extrinsics().rotation().row(2).transpose();
        int best = 0;
        double best_score = -1.0;
        for (int k = 0; k < n; ++k) {
            const Vec3 ci = camera_center(inputs[k].extrinsics());
            const Vec3 zi = inputs[k].extrinsics().rotation().row(2).transpose();
            const double score = 1.0 / std::max((ct - ci).norm(), 1e-8) + (zt.dot(zi) + 1.0) / 2.0;
            if (score > best_score) {
                best_score = score;
                best = k;
            }
        }
        const auto pick = select_reference(tgt, inputs);
        EXPECT_EQ(pick.view_index, best);
        EXPECT_NEAR(pick.score.score, best_score, 1e-12 * best_score);
        ASSERT_EQ(pick.all.size(), static_cast<std::size_t>(n));
    }
}

TEST(SelectReference, InvariantUnderGlobalRigidMotion) {
    SeededStream rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const CameraView tgt = at(random_vec(rng, -3, 3), random_rotation(rng));
        std::vector<CameraView> inputs;
        for (int k = 0; k < 5; ++k) inputs.push_back(at(random_vec(rng, -3, 3), random_rotation(rng)));
        const Mat3 q = random_rotation(rng);
        const Vec3 u = random_vec(rng, -10, 10);
        std::vector<CameraView> moved;
        for (const auto &cam : inputs) moved.push_back(testing::transform_camera(cam, q, u));
        const auto a = select_reference(tgt, inputs);
        const auto b = select_reference(testing::transform_camera(tgt, q, u), moved);
        EXPECT_EQ(a.view_index, b.view_index);
        for (int k = 0; k < 5; ++k) EXPECT_NEAR(a.all[k].score, b.all[k].score, 1e-9);
    }
}

TEST(SelectReference, ScalingPositionsNeverRaisesScores) {
    SeededStream rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const double k = rng.uniform(1.01, 5.0);
        const Vec3 ct = random_vec(rng, -3, 3);
        const Mat3 rt = random_rotation(rng);
        const Vec3 ci = random_vec(rng, -3, 3);
        const Mat3 ri = random_rotation(rng);
        const double before = overlap_score(at(ct, rt), at(ci, ri)).score;
        const double after = overlap_score(at(k * ct, rt), at(k * ci, ri)).score;
        EXPECT_LE(after, before);
    }
}

TEST(SelectReference, NormalizedDistanceIsScaleFree) {
    const CameraView tgt = at(Vec3::Zero());
    const std::vector<CameraView> inputs = {at(Vec3(2, 0, 0)), at(Vec3(0, 4, 0), yaw(0.3))};
    const std::vector<CameraView> scaled = {at(Vec3(20, 0, 0)), at(Vec3(0, 40, 0), yaw(0.3))};
    OverlapOptions opts;
    opts.normalize_distance = true;
    const auto a = select_reference(tgt, inputs, opts);
    const auto b = select_reference(tgt, scaled, opts);
    EXPECT_EQ(a.view_index, b.view_index);
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.all[k].score, b.all[k].score, 1e-12);
    EXPECT_NEAR(a.all[0].score, 3.0, 1e-12); // 1 / (2 / 4) plus full alignment
}

} // namespace
} // namespace prosplat
