// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/manifest.hpp"

#include "prosplat/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace prosplat {

using nlohmann::json;

std::vector<CameraView> SceneManifest::cameras(const std::vector<int> &indices) const {
    std::vector<CameraView> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(views.at(i).camera);
    return out;
}

void validate_indices(const SceneManifest &m) {
    const int n = static_cast<int>(m.views.size());
    std::set<int> inputs, targets;
    auto fail = [](const std::string &why) { throw Error(ErrorCode::InvalidIndices, why); };
    for (int i : m.input_indices) {
        if (i < 0 || i >= n) fail("input index " + std::to_string(i) + " out of range");
        if (!inputs.insert(i).second) fail("duplicate input index " + std::to_string(i));
    }
    for (int i : m.target_indices) {
        if (i < 0 || i >= n) fail("target index " + std::to_string(i) + " out of range");
        if (!targets.insert(i).second) fail("duplicate target index " + std::to_string(i));
        if (inputs.count(i)) fail("index " + std::to_string(i) + " is both input and target");
    }
    if (inputs.size() < 2) fail("a scene needs at least two input views");
}

SceneManifest load_scene_manifest(const std::filesystem::path &path, const ManifestLoadOptions &opts) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, "missing manifest " + path.string());

    SceneManifest m;
    m.root = path.parent_path();
    std::vector<std::string> images;
    try {
        const json doc = json::parse(in);
        m.scene_id = doc.at("scene_id").get<std::string>();
        m.image_width = doc.at("image_width").get<int>();
        m.image_height = doc.at("image_height").get<int>();
        m.near = doc.at("near").get<double>();
        m.far = doc.at("far").get<double>();
        m.pose_file = doc.at("pose_file").get<std::string>();
        images = doc.at("images").get<std::vector<std::string>>();
        m.input_indices = doc.at("input_indices").get<std::vector<int>>();
        m.target_indices = doc.at("target_indices").get<std::vector<int>>();
        if (doc.contains("primitives") && !doc.at("primitives").is_null()) {
            m.primitives = doc.at("primitives").get<std::string>();
        }
    } catch (const json::exception &e) {
        throw Error(ErrorCode::InvalidArgument, "malformed manifest " + path.string() + ": " + e.what());
    }

    std::vector<std::string> missing;
    const auto pose_path = m.resolve(m.pose_file);
    if (!std::filesystem::exists(pose_path)) missing.push_back(pose_path.string());
    if (opts.check_images) {
        for (const auto &img : images) {
            if (!std::filesystem::exists(m.resolve(img))) missing.push_back(m.resolve(img).string());
        }
    }
    if (m.primitives && !std::filesystem::exists(m.resolve(*m.primitives))) {
        missing.push_back(m.resolve(*m.primitives).string());
    }
    if (!missing.empty()) {
        std::string msg = "missing files:";
        for (const auto &p : missing) msg += " " + p;
        throw Error(ErrorCode::MissingFile, msg);
    }

    std::ifstream pose_in(pose_path);
    PoseFile poses = parse_pose_file(pose_in, m.image_width, m.image_height, opts.pose);
    if (poses.records.size() != images.size()) {
        throw Error(ErrorCode::InvalidIndices, "manifest lists " + std::to_string(images.size()) + " images but the pose file has " +
                                                   std::to_string(poses.records.size()) + " cameras");
    }
    m.pose_header = poses.header;
    m.poses = poses.records;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto &rec = poses.records[i];
        m.views.push_back({images[i], CameraView(rec.intrinsics, rec.extrinsics, m.near, m.far), rec.timestamp});
    }
    validate_indices(m);
    return m;
}

void save_scene_manifest(const std::filesystem::path &path, const SceneManifest &m) {
    validate_indices(m);
    json doc;
    doc["scene_id"] = m.scene_id;
    doc["image_width"] = m.image_width;
    doc["image_height"] = m.image_height;
    doc["near"] = m.near;
    doc["far"] = m.far;
    doc["pose_file"] = m.pose_file;
    std::vector<std::string> images;
    for (const auto &v : m.views) images.push_back(v.image);
    doc["images"] = images;
    doc["input_indices"] = m.input_indices;
    doc["target_indices"] = m.target_indices;
    if (m.primitives) doc["primitives"] = *m.primitives;

    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << doc.dump(2) << '\n';

    PoseFile poses{m.pose_header, m.image_width, m.image_height, m.poses};
    std::ofstream pose_out(path.parent_path() / m.pose_file);
    if (!pose_out) throw Error(ErrorCode::IoError, "cannot write pose file next to " + path.string());
    write_pose_file(pose_out, poses);
}

} // namespace prosplat
