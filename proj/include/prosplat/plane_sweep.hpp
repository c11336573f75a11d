// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"
#include "prosplat/feature_grid.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace prosplat {

enum class DepthSpacing { Inverse, Linear };

/// D depth hypotheses in [near, far], uniform in inverse depth by default.
/// The endpoints are exact for D >= 2; D == 1 yields {near}.
/// Throws InvalidRange unless 0 < near < far and D >= 1.
std::vector<double> sample_depth_candidates(double near, double far, int count,
                                            DepthSpacing spacing = DepthSpacing::Inverse);

struct WarpedFeature {
    FeatureGrid features;
    /// 1 where the reprojection lands inside the source grid, row-major cells.
    std::vector<std::uint8_t> valid;
};

/// Warps src (observed from src_view) into dst_view through the fronto-parallel
/// plane z = depth of the destination camera. Out-of-bounds samples are zero
/// and flagged invalid.
WarpedFeature warp_feature(const FeatureGrid &src, const CameraView &src_view, const CameraView &dst_view,
                           double depth, GridSize dst_grid);

/// Same-size convenience overload: the destination grid matches src.
WarpedFeature warp_feature(const FeatureGrid &src, const CameraView &src_view, const CameraView &dst_view,
                           double depth);

struct CostVolume {
    int h = 0;
    int w = 0;
    int depth_count = 0;
    std::vector<double> depths;
    /// Cell-major: values[p * depth_count + m].
    std::vector<double> values;
    /// 1 when every other view sampled inside its grid for (p, m).
    std::vector<std::uint8_t> valid;

    double at(int p, int m) const { return values[static_cast<std::size_t>(p) * depth_count + m]; }
    bool is_valid(int p, int m) const { return valid[static_cast<std::size_t>(p) * depth_count + m] != 0; }
    /// Depth index with the largest matching cost at cell p (lowest index on ties).
    int argmax(int p) const;
};

/// values[p, m] = mean over other views of <warp(other, d_m)(p), ref(p)> / c.
/// Throws ShapeMismatch on inconsistent grids, EmptyInputSet without other
/// views, InvalidRange unless depths are positive and strictly increasing.
CostVolume build_cost_volume(const FeatureGrid &ref_feat, const CameraView &ref_view,
                             std::span<const FeatureGrid> other_feats, std::span<const CameraView> other_views,
                             std::span<const double> depths);

} // namespace prosplat
