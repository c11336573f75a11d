// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/camera.hpp"

#include "prosplat/error.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace prosplat {

CameraIntrinsics::CameraIntrinsics(double fx, double fy, double cx, double cy, int width, int height)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), width_(width), height_(height) {
    const bool ok = std::isfinite(fx) && std::isfinite(fy) && fx > 0.0 && fy > 0.0 && width > 0 &&
                    height > 0 && cx >= 0.0 && cx < width && cy >= 0.0 && cy < height;
    if (!ok) {
        std::ostringstream msg;
        msg << "invalid intrinsics fx=" << fx << " fy=" << fy << " cx=" << cx << " cy=" << cy
            << " size=" << width << "x" << height;
        throw Error(ErrorCode::InvalidCamera, msg.str());
    }
}

Mat3 CameraIntrinsics::matrix() const {
    Mat3 k;
    k << fx_, 0.0, cx_, 0.0, fy_, cy_, 0.0, 0.0, 1.0;
    return k;
}

Mat3 CameraIntrinsics::inverse() const {
    Mat3 k;
    k << 1.0 / fx_, 0.0, -cx_ / fx_, 0.0, 1.0 / fy_, -cy_ / fy_, 0.0, 0.0, 1.0;
    return k;
}

CameraExtrinsics::CameraExtrinsics() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

CameraExtrinsics::CameraExtrinsics(const Mat3 &rotation, const Vec3 &translation)
    : rotation_(rotation), translation_(translation) {
    const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
    const double det = rotation.determinant();
    if (!(ortho <= kRotationTolerance) || !(std::abs(det - 1.0) <= kRotationTolerance) ||
        !translation.allFinite()) {
        std::ostringstream msg;
        msg << "rotation is not rigid: max|R^T R - I| = " << ortho << ", det = " << det;
        throw Error(ErrorCode::NonRigidRotation, msg.str());
    }
}

CameraExtrinsics CameraExtrinsics::from_matrix(const Mat34 &rt, double tolerance) {
    Mat3 r = rt.leftCols<3>();
    const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
    const double det_err = std::abs(r.determinant() - 1.0);
    const bool rigid = ortho <= kRotationTolerance && det_err <= kRotationTolerance;
    if (!rigid && ortho <= tolerance && det_err <= tolerance) {
        Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
        r = svd.matrixU() * svd.matrixV().transpose();
    }
    return CameraExtrinsics(r, rt.col(3));
}

Mat34 CameraExtrinsics::matrix() const {
    Mat34 m;
    m.leftCols<3>() = rotation_;
    m.col(3) = translation_;
    return m;
}

CameraView::CameraView(CameraIntrinsics intrinsics, CameraExtrinsics extrinsics, double near, double far)
    : intrinsics_(intrinsics), extrinsics_(extrinsics), near_(near), far_(far) {
    if (!(near > 0.0 && near < far && std::isfinite(far))) {
        std::ostringstream msg;
        msg << "invalid depth bounds near=" << near << " far=" << far;
        throw Error(ErrorCode::InvalidCamera, msg.str());
    }
}

Vec2 CameraView::project_camera_point(const Vec3 &cam) const {
    return {intrinsics_.fx() * cam.x() / cam.z() + intrinsics_.cx(),
            intrinsics_.fy() * cam.y() / cam.z() + intrinsics_.cy()};
}

Vec3 CameraView::unproject(const Vec2 &pixel, double depth) const {
    return {(pixel.x() - intrinsics_.cx()) / intrinsics_.fx() * depth,
            (pixel.y() - intrinsics_.cy()) / intrinsics_.fy() * depth, depth};
}

Vec3 camera_center(const CameraExtrinsics &ext) {
    return -ext.rotation().transpose() * ext.translation();
}

Vec3 viewing_direction(const CameraExtrinsics &ext) {
    return ext.rotation().row(2).transpose().normalized();
}

Mat3 skew(const Vec3 &v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

} // namespace prosplat
