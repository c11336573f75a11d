// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/manifest.hpp"
#include "prosplat/view_select.hpp"

#include <filesystem>
#include <map>
#include <vector>

namespace prosplat {

inline constexpr int kMinCuratedTargets = 5;
inline constexpr int kMaxCuratedTargets = 7;

/// Positions (into a list of `available` targets) kept for curation:
/// min(7, max(5, available)) clipped to what exists, spread uniformly with
/// position k = floor((2k + 1) * available / (2 * count)).
std::vector<int> curation_positions(int available);

struct CuratedPair {
    int target_index = -1;
    /// Manifest view index of the selected input view.
    int reference_index = -1;
    std::filesystem::path rendered;
    std::filesystem::path ground_truth;
    std::filesystem::path reference_image;
    CameraView target_camera;
    CameraView reference_camera;
    OverlapScore score;
};

struct CurationResult {
    std::vector<CuratedPair> pairs;
    /// Fewer than five targets existed; all of them were kept.
    bool below_range = false;
};

/// Builds training pairs: for each chosen target, its rendered image, its
/// ground truth, and the maximum-overlap input view. `rendered` maps target
/// view index to the rendered image. Throws NoTargets, or MissingFile when a
/// chosen target has no rendering.
CurationResult curate_pairs(const SceneManifest &manifest, const std::map<int, std::filesystem::path> &rendered,
                            const OverlapOptions &opts = {});

} // namespace prosplat
