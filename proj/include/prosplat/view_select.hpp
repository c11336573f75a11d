// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"

#include <span>
#include <vector>

namespace prosplat {

/// Maximum-overlap reference selection: an inverse-distance term plus a
/// viewing-direction alignment term mapped to [0, 1].
struct OverlapOptions {
    /// Distance between camera centres (rigid-invariant). When false, the raw
    /// world-to-camera translation vectors are compared.
    bool use_camera_centers = true;
    /// Take the viewing axis from the camera-to-world rotation (the world-space
    /// optical axis). When false, the third column of the stored world-to-camera
    /// rotation is used.
    bool camera_to_world_axis = true;
    /// Divides distances before inversion. select_reference() replaces it with
    /// the largest candidate distance when normalize_distance is set.
    double distance_scale = 1.0;
    bool normalize_distance = false;
};

inline constexpr double kOverlapDistanceEpsilon = 1e-8;

struct OverlapScore {
    double dist = 0.0;
    double angle = 0.0;
    double score = 0.0;
    int view_index = -1;
};

OverlapScore overlap_score(const CameraView &tgt, const CameraView &input, const OverlapOptions &opts = {});

/// Scores for every input, in input order, with view_index set to the position.
std::vector<OverlapScore> overlap_scores(const CameraView &tgt, std::span<const CameraView> inputs,
                                         const OverlapOptions &opts = {});

struct ReferenceSelection {
    int view_index = -1;
    OverlapScore score;
    std::vector<OverlapScore> all;
};

/// Argmax of the overlap score; ties resolve to the lowest index. Throws
/// EmptyInputSet when there are no inputs.
ReferenceSelection select_reference(const CameraView &tgt, std::span<const CameraView> inputs,
                                    const OverlapOptions &opts = {});

} // namespace prosplat
