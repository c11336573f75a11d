// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/view_select.hpp"

#include "prosplat/error.hpp"

#include <algorithm>

namespace prosplat {

namespace {

Vec3 position(const CameraExtrinsics &ext, const OverlapOptions &opts) {
    return opts.use_camera_centers ? camera_center(ext) : ext.translation();
}

Vec3 axis(const CameraExtrinsics &ext, const OverlapOptions &opts) {
    return opts.camera_to_world_axis ? Vec3(ext.rotation().row(2).transpose()) : Vec3(ext.rotation().col(2));
}

} // namespace

OverlapScore overlap_score(const CameraView &tgt, const CameraView &input, const OverlapOptions &opts) {
    OverlapScore out;
    out.dist = (position(tgt.extrinsics(), opts) - position(input.extrinsics(), opts)).norm();
    const double cosine = axis(tgt.extrinsics(), opts).normalized().dot(axis(input.extrinsics(), opts).normalized());
    out.angle = std::clamp(cosine, -1.0, 1.0);
    const double scaled = out.dist / opts.distance_scale;
    out.score = 1.0 / std::max(scaled, kOverlapDistanceEpsilon) + 0.5 * (out.angle + 1.0);
    return out;
}

std::vector<OverlapScore> overlap_scores(const CameraView &tgt, std::span<const CameraView> inputs,
                                         const OverlapOptions &opts) {
    OverlapOptions effective = opts;
    if (opts.normalize_distance) {
        double largest = 0.0;
        for (const auto &in : inputs) {
            largest = std::max(largest, (position(tgt.extrinsics(), opts) - position(in.extrinsics(), opts)).norm());
        }
        effective.distance_scale = largest > 0.0 ? largest : 1.0;
    }
    std::vector<OverlapScore> scores;
    scores.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        scores.push_back(overlap_score(tgt, inputs[i], effective));
        scores.back().view_index = static_cast<int>(i);
    }
    return scores;
}

ReferenceSelection select_reference(const CameraView &tgt, std::span<const CameraView> inputs,
                                    const OverlapOptions &opts) {
    if (inputs.empty()) throw Error(ErrorCode::EmptyInputSet, "reference selection needs at least one input view");
    ReferenceSelection sel;
    sel.all = overlap_scores(tgt, inputs, opts);
    std::size_t best = 0;
    for (std::size_t i = 1; i < sel.all.size(); ++i) {
        if (sel.all[i].score > sel.all[best].score) best = i;
    }
    sel.view_index = static_cast<int>(best);
    sel.score = sel.all[best];
    return sel;
}

} // namespace prosplat
