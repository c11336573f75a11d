// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace prosplat {

struct GridSize {
    int h = 0;
    int w = 0;

    int cells() const { return h * w; }
    bool operator==(const GridSize &) const = default;
};

struct FundamentalOptions {
    /// Evaluate the variant K_ref^-1 [t]x R_ref R_tgt^T K_tgt^-1 with
    /// t = T_ref - R_tgt^T T_tgt (untransposed K_ref, unrotated translation),
    /// for comparison only. It does not satisfy the epipolar constraint in general.
    bool literal_form = false;
};

/// Fundamental matrix F with x_ref^T F x_tgt = 0, normalised to unit Frobenius
/// norm. Throws DegenerateBaseline when the camera centres coincide.
Mat3 fundamental_matrix(const CameraView &tgt, const CameraView &ref, const FundamentalOptions &opts = {});

/// Relative motion taking target camera coordinates to reference camera coordinates.
struct RelativePose {
    Mat3 rotation;
    Vec3 translation;
};
RelativePose relative_pose(const CameraExtrinsics &tgt, const CameraExtrinsics &ref);

struct EpipolarMapOptions {
    FundamentalOptions fundamental;
    /// Distance written into rows whose epipolar line is undefined. When unset,
    /// the largest finite distance in the map is used.
    std::optional<double> degenerate_sentinel;
};

/// Point-to-epipolar-line distances between every target grid cell and every
/// reference grid cell, measured in reference grid cells.
struct EpipolarDistanceMap {
    GridSize target_dims;
    GridSize ref_dims;
    /// target cells x reference cells, both in row-major cell order.
    Eigen::MatrixXd d;
    /// Target cells that sit on the epipole (a^2 + b^2 < 1e-18); their rows hold the sentinel.
    std::vector<int> degenerate_rows;
};

EpipolarDistanceMap epipolar_distance_map(const CameraView &tgt, const CameraView &ref, GridSize tgt_grid,
                                          GridSize ref_grid, const EpipolarMapOptions &opts = {});

} // namespace prosplat
