// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"
#include "prosplat/pose_file.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prosplat {

struct SceneView {
    /// Path as written in the manifest, relative to its directory.
    std::string image;
    CameraView camera;
    double timestamp = 0.0;
};

/// A scene: views in pose-file order, with disjoint input and target sets.
///
/// On disk (docs/manifest.schema.json):
///   {"scene_id": "...", "image_width": W, "image_height": H,
///    "near": n, "far": f, "pose_file": "poses.txt",
///    "images": ["images/000.png", ...],
///    "input_indices": [...], "target_indices": [...],
///    "primitives": "primitives.json"}            // optional
/// Relative paths resolve against the manifest's directory.
struct SceneManifest {
    std::string scene_id;
    std::filesystem::path root;
    int image_width = 0;
    int image_height = 0;
    double near = 0.0;
    double far = 0.0;
    std::string pose_file;
    std::string pose_header;
    std::vector<PoseRecord> poses;
    std::vector<SceneView> views;
    std::vector<int> input_indices;
    std::vector<int> target_indices;
    std::optional<std::string> primitives;

    std::filesystem::path resolve(const std::string &relative) const { return root / relative; }
    std::vector<CameraView> cameras(const std::vector<int> &indices) const;
};

/// Throws InvalidIndices unless indices are in range, unique, disjoint, and
/// there are at least two inputs.
void validate_indices(const SceneManifest &manifest);

struct ManifestLoadOptions {
    bool check_images = true;
    PoseParseOptions pose;
};

/// Loads and validates a manifest. MissingFile lists every missing path.
SceneManifest load_scene_manifest(const std::filesystem::path &path, const ManifestLoadOptions &opts = {});

/// Writes the manifest JSON to `path` and its pose file next to it (at
/// manifest.pose_file). Images are not touched.
void save_scene_manifest(const std::filesystem::path &path, const SceneManifest &manifest);

} // namespace prosplat
