// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"

#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace prosplat {

constexpr int kMaxShDegree = 3;

/// Number of SH basis functions per colour channel for a given degree.
constexpr int sh_basis_count(int degree) { return (degree + 1) * (degree + 1); }

/// Anisotropic 3D Gaussian with view-dependent colour.
///
/// `sh` stores coefficients basis-major: sh[3 * k + channel] for basis k.
struct GaussianPrimitive {
    Vec3 mu = Vec3::Zero();
    std::vector<double> sh = std::vector<double>(3, 0.0);
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
    Vec3 s = Vec3::Ones();
    double alpha = 1.0;

    int sh_degree() const;
    /// Sigma = R S S^T R^T.
    Mat3 covariance() const;
};

/// Throws InvalidPrimitive when any invariant fails (unit q within 1e-9,
/// positive scales, alpha in [0, 1], SH size 3 (deg+1)^2 with deg <= 3).
void validate(const GaussianPrimitive &prim);

/// RGB colour from SH along a unit view direction, offset by 0.5 and clamped
/// to [0, 1]. Only bases up to min(max_degree, prim degree) are used.
Vec3 evaluate_sh(std::span<const double> sh, const Vec3 &direction, int max_degree);

/// Colour encoded by DC coefficients alone: inverse of evaluate_sh at degree 0.
std::vector<double> sh_from_rgb(const Vec3 &rgb);

} // namespace prosplat
