// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/epipolar.hpp"
#include "prosplat/error.hpp"

#include "../support/oracles.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>

namespace prosplat {
namespace {

using testing::look_at_camera;
using testing::project_world;
using testing::random_rotation;
using testing::random_vec;

// K = I camera: unit focal length, principal point at the image origin.
CameraView identity_camera_at(const Vec3 &centre, int size = 4) {
    return CameraView(CameraIntrinsics(1.0, 1.0, 0.0, 0.0, size, size), CameraExtrinsics(Mat3::Identity(), -centre),
                      0.1, 10.0);
}

TEST(CameraIntrinsics, RejectsInvalidParameters) {
    EXPECT_THROW(CameraIntrinsics(0.0, 1.0, 1.0, 1.0, 4, 4), Error);
    EXPECT_THROW(CameraIntrinsics(1.0, 1.0, 4.0, 1.0, 4, 4), Error);
    EXPECT_THROW(CameraIntrinsics(1.0, 1.0, 1.0, -0.1, 4, 4), Error);
    EXPECT_NO_THROW(CameraIntrinsics(1.0, 1.0, 0.0, 3.999, 4, 4));
}

TEST(CameraExtrinsics, RejectsNonRigidRotation) {
    Mat3 scaled = Mat3::Identity() * 1.001;
    try {
        CameraExtrinsics bad(scaled, Vec3::Zero());
        FAIL() << "expected NonRigidRotation";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonRigidRotation);
    }
    Mat3 reflection = Mat3::Identity();
    reflection(2, 2) = -1.0;
    EXPECT_THROW(CameraExtrinsics(reflection, Vec3::Zero()), Error);
}

TEST(CameraExtrinsics, FromMatrixSnapsNearRotations) {
    SeededStream rng(3);
    Mat34 rt;
    rt.leftCols<3>() = random_rotation(rng);
    rt.col(3) = Vec3(1, 2, 3);
    rt(0, 0) += 1e-7;
    EXPECT_THROW(CameraExtrinsics(rt.leftCols<3>(), rt.col(3)), Error);
    const CameraExtrinsics snapped = CameraExtrinsics::from_matrix(rt, 1e-5);
    EXPECT_LT((snapped.rotation() - rt.leftCols<3>()).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_THROW(CameraExtrinsics::from_matrix(rt, 1e-9), Error);
}

TEST(CameraCenter, ClosedForms) {
    EXPECT_EQ(camera_center(CameraExtrinsics(Mat3::Identity(), Vec3::Zero())), Vec3::Zero());
    EXPECT_EQ(camera_center(CameraExtrinsics(Mat3::Identity(), Vec3(1, 2, 3))), Vec3(-1, -2, -3));
}

TEST(CameraCenter, MatchesMatrixInverseOracle) {
    SeededStream rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const Mat3 r = random_rotation(rng);
        const Vec3 t = random_vec(rng, -10, 10);
        const CameraExtrinsics ext(r, t);
        const Vec3 c = camera_center(ext);
        EXPECT_LT((c - testing::centre_by_matrix_inverse(r, t)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(ext.to_camera(c).norm(), 1e-12);
    }
}

TEST(FundamentalMatrix, IdenticalCamerasAreDegenerate) {
    const CameraView cam = identity_camera_at(Vec3::Zero());
    try {
        fundamental_matrix(cam, cam);
        FAIL() << "expected DegenerateBaseline";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateBaseline);
    }
}

TEST(FundamentalMatrix, PureXTranslation) {
    const CameraView tgt = identity_camera_at(Vec3::Zero());
    const CameraView ref = identity_camera_at(Vec3(1, 0, 0));
    const Mat3 f = fundamental_matrix(tgt, ref);
    Mat3 expected;
    expected << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    expected /= expected.norm();
    const double sign = f(2, 1) > 0 ? 1.0 : -1.0;
    EXPECT_LT((sign * f - expected).cwiseAbs().maxCoeff(), 1e-15);

    // Every epipolar line is horizontal at the target pixel's row.
    for (double y : {-2.0, 0.0, 0.5, 3.0}) {
        const Vec3 line = f * Vec3(0.7, y, 1.0);
        EXPECT_NEAR(line.x(), 0.0, 1e-15);
        EXPECT_NEAR(-line.z() / line.y(), y, 1e-12);
    }
}

TEST(FundamentalMatrix, EpipolarConstraintOnRandomPoses) {
    SeededStream rng(2024);
    double worst = 0.0;
    for (int pair = 0; pair < 100; ++pair) {
        const CameraView tgt = look_at_camera(rng, random_vec(rng, -5, 5), random_vec(rng, -0.5, 0.5));
        const CameraView ref = look_at_camera(rng, random_vec(rng, -5, 5), random_vec(rng, -0.5, 0.5));
        const Mat3 f = fundamental_matrix(tgt, ref);
        EXPECT_NEAR(f.norm(), 1.0, 1e-12);
        for (int k = 0; k < 10; ++k) {
            const Vec3 x = random_vec(rng, -0.5, 0.5);
            const Vec2 pt = project_world(tgt, x);
            const Vec2 pr = project_world(ref, x);
            worst = std::max(worst, std::abs(Vec3(pr.x(), pr.y(), 1).dot(f * Vec3(pt.x(), pt.y(), 1))));
        }
        const Eigen::JacobiSVD<Mat3> svd(f);
        EXPECT_LT(svd.singularValues()[2], 1e-9 * svd.singularValues()[0]);
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(FundamentalMatrix, LiteralFormViolatesConstraintInGeneral) {
    SeededStream rng(99);
    const CameraView tgt = look_at_camera(rng, Vec3(-2, 0.3, -4), Vec3::Zero());
    const CameraView ref = look_at_camera(rng, Vec3(2, -0.2, -4), Vec3::Zero());
    FundamentalOptions literal;
    literal.literal_form = true;
    const Mat3 f = fundamental_matrix(tgt, ref, literal);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Vec3 x = random_vec(rng, -0.5, 0.5);
        const Vec2 pt = project_world(tgt, x);
        const Vec2 pr = project_world(ref, x);
        worst = std::max(worst, std::abs(Vec3(pr.x(), pr.y(), 1).dot(f * Vec3(pt.x(), pt.y(), 1))));
    }
    EXPECT_GT(worst, 1e-6);
}

TEST(EpipolarDistanceMap, HorizontalLinesGiveRowDistances) {
    const CameraView tgt = identity_camera_at(Vec3::Zero());
    const CameraView ref = identity_camera_at(Vec3(1, 0, 0));
    const EpipolarDistanceMap map = epipolar_distance_map(tgt, ref, {4, 4}, {4, 4});
    ASSERT_EQ(map.d.rows(), 16);
    ASSERT_EQ(map.d.cols(), 16);
    EXPECT_TRUE(map.degenerate_rows.empty());
    for (int p = 0; p < 16; ++p) {
        for (int q = 0; q < 16; ++q) {
            EXPECT_NEAR(map.d(p, q), std::abs(p / 4 - q / 4), 1e-12) << p << "," << q;
        }
    }
}

TEST(EpipolarDistanceMap, GridScaleMatchesRescaledFullResolution) {
    SeededStream rng(7);
    for (int trial = 0; trial < 4; ++trial) {
        const CameraView tgt = look_at_camera(rng, random_vec(rng, -4, 4), random_vec(rng, -0.5, 0.5));
        const CameraView ref = look_at_camera(rng, random_vec(rng, -4, 4), random_vec(rng, -0.5, 0.5));
        const GridSize grid{60, 80}; // 8x downsampling of 640x480
        const EpipolarDistanceMap map = epipolar_distance_map(tgt, ref, grid, grid);
        const Mat3 f = fundamental_matrix(tgt, ref);
        for (int k = 0; k < 50; ++k) {
            const int p = static_cast<int>(rng.unit() * grid.cells());
            const int q = static_cast<int>(rng.unit() * grid.cells());
            // Full-resolution point-line distance at the cell-centre pixels.
            const Vec2 xt = grid_cell_to_pixel(p / grid.w, p % grid.w, grid.h, grid.w, 640, 480);
            const Vec2 xr = grid_cell_to_pixel(q / grid.w, q % grid.w, grid.h, grid.w, 640, 480);
            const Vec3 line = f * Vec3(xt.x(), xt.y(), 1);
            const double full = std::abs(line.dot(Vec3(xr.x(), xr.y(), 1))) / line.head<2>().norm();
            EXPECT_NEAR(map.d(p, q), full / 8.0, 1e-6);
        }
    }
}

TEST(EpipolarDistanceMap, IncidentPixelHasZeroDistance) {
    SeededStream rng(5);
    // Reference grid equals the full image so cells sit on integer-plus-half pixels.
    const CameraView tgt = look_at_camera(rng, Vec3(-1, 0, -5), Vec3::Zero(), 32, 24);
    const CameraView ref = look_at_camera(rng, Vec3(1, 0.2, -5), Vec3::Zero(), 32, 24);
    const Mat3 f = fundamental_matrix(tgt, ref);
    const EpipolarDistanceMap map = epipolar_distance_map(tgt, ref, {24, 32}, {24, 32});
    double nonneg = map.d.minCoeff();
    EXPECT_GE(nonneg, 0.0);
    // A pixel constructed on the line through the reference grid.
    const Vec2 xt = grid_cell_to_pixel(10, 12, 24, 32, 32, 24);
    const Vec3 line = f * Vec3(xt.x(), xt.y(), 1);
    const double x_on = 16.0;
    const double y_on = -(line.x() * x_on + line.z()) / line.y();
    EXPECT_LT(std::abs(line.dot(Vec3(x_on, y_on, 1))) / line.head<2>().norm(), 1e-9);
}

TEST(EpipolarDistanceMap, EpipoleOnPixelIsFlagged) {
    // Reference centre straight ahead of the target: the epipole is the
    // principal point, which coincides with grid cell (2, 2) centre.
    const CameraIntrinsics k(4.0, 4.0, 2.5, 2.5, 4, 4);
    const CameraView tgt(k, CameraExtrinsics(Mat3::Identity(), Vec3::Zero()), 0.1, 10.0);
    const CameraView ref(k, CameraExtrinsics(Mat3::Identity(), Vec3(0, 0, -1)), 0.1, 10.0);
    const EpipolarDistanceMap map = epipolar_distance_map(tgt, ref, {4, 4}, {4, 4});
    ASSERT_EQ(map.degenerate_rows.size(), 1u);
    EXPECT_EQ(map.degenerate_rows[0], 2 * 4 + 2);
    double largest = 0.0;
    for (int p = 0; p < 16; ++p) {
        if (p != 10) largest = std::max(largest, map.d.row(p).maxCoeff());
    }
    EXPECT_TRUE((map.d.row(10).array() == largest).all());

    EpipolarMapOptions opts;
    opts.degenerate_sentinel = 1e6;
    const EpipolarDistanceMap custom = epipolar_distance_map(tgt, ref, {4, 4}, {4, 4}, opts);
    EXPECT_TRUE((custom.d.row(10).array() == 1e6).all());
}

TEST(EpipolarDistanceMap, PropagatesDegenerateBaseline) {
    const CameraView cam = identity_camera_at(Vec3::Zero());
    EXPECT_THROW(epipolar_distance_map(cam, cam, {2, 2}, {2, 2}), Error);
}

} // namespace
} // namespace prosplat
