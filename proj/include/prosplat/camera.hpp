// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

namespace prosplat {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat4 = Eigen::Matrix4d;

/// Pinhole intrinsics in pixels. Image coordinates are continuous with pixel
/// (col, row) centred at (col + 0.5, row + 0.5).
class CameraIntrinsics {
public:
    /// Throws InvalidCamera unless fx, fy > 0, 0 <= cx < width, 0 <= cy < height.
    CameraIntrinsics(double fx, double fy, double cx, double cy, int width, int height);

    double fx() const { return fx_; }
    double fy() const { return fy_; }
    double cx() const { return cx_; }
    double cy() const { return cy_; }
    int width() const { return width_; }
    int height() const { return height_; }

    Mat3 matrix() const;
    Mat3 inverse() const;

private:
    double fx_, fy_, cx_, cy_;
    int width_, height_;
};

/// World-to-camera rigid transform: x_cam = R * x_world + T.
class CameraExtrinsics {
public:
    static constexpr double kRotationTolerance = 1e-9;

    CameraExtrinsics();
    /// Throws NonRigidRotation unless R^T R = I and det(R) = +1 within tolerance.
    CameraExtrinsics(const Mat3 &rotation, const Vec3 &translation);

    /// Accepts [R | T] and, when R is within `tolerance` of a rotation, snaps
    /// it onto SO(3) before validation. Used for text formats carrying only a
    /// few significant digits.
    static CameraExtrinsics from_matrix(const Mat34 &rt, double tolerance);

    const Mat3 &rotation() const { return rotation_; }
    const Vec3 &translation() const { return translation_; }

    Mat34 matrix() const;
    Vec3 to_camera(const Vec3 &world) const { return rotation_ * world + translation_; }
    Vec3 to_world(const Vec3 &cam) const { return rotation_.transpose() * (cam - translation_); }

private:
    Mat3 rotation_;
    Vec3 translation_;
};

class CameraView {
public:
    /// Throws InvalidCamera unless 0 < near < far.
    CameraView(CameraIntrinsics intrinsics, CameraExtrinsics extrinsics, double near, double far);

    const CameraIntrinsics &intrinsics() const { return intrinsics_; }
    const CameraExtrinsics &extrinsics() const { return extrinsics_; }
    double near() const { return near_; }
    double far() const { return far_; }

    /// Continuous pixel coordinates of a camera-space point (z must be nonzero).
    Vec2 project_camera_point(const Vec3 &cam) const;
    /// Camera-space point at depth z along the ray through a pixel position.
    Vec3 unproject(const Vec2 &pixel, double depth) const;

private:
    CameraIntrinsics intrinsics_;
    CameraExtrinsics extrinsics_;
    double near_, far_;
};

/// Camera centre in world coordinates, C = -R^T T.
Vec3 camera_center(const CameraExtrinsics &ext);

/// World-space unit viewing direction (camera +z axis).
Vec3 viewing_direction(const CameraExtrinsics &ext);

/// Grid cell (row, col) of an h x w grid laid over a width x height image,
/// mapped to the image position of the cell centre.
inline Vec2 grid_cell_to_pixel(int row, int col, int grid_h, int grid_w, int width, int height) {
    return {(col + 0.5) * width / grid_w, (row + 0.5) * height / grid_h};
}

Mat3 skew(const Vec3 &v);

} // namespace prosplat
