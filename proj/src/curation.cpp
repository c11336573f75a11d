// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/curation.hpp"

#include "prosplat/error.hpp"

#include <algorithm>

namespace prosplat {

std::vector<int> curation_positions(int available) {
    if (available < 1) return {};
    const int count = std::min(available, std::min(kMaxCuratedTargets, std::max(kMinCuratedTargets, available)));
    std::vector<int> positions(count);
    for (int k = 0; k < count; ++k) {
        positions[k] = static_cast<int>((2LL * k + 1) * available / (2LL * count));
    }
    return positions;
}

CurationResult curate_pairs(const SceneManifest &manifest, const std::map<int, std::filesystem::path> &rendered,
                            const OverlapOptions &opts) {
    if (manifest.target_indices.empty()) throw Error(ErrorCode::NoTargets, "scene " + manifest.scene_id + " has no target views");
    validate_indices(manifest);

    const std::vector<CameraView> inputs = manifest.cameras(manifest.input_indices);
    const int available = static_cast<int>(manifest.target_indices.size());

    CurationResult result;
    result.below_range = available < kMinCuratedTargets;
    for (int pos : curation_positions(available)) {
        const int target = manifest.target_indices[pos];
        const auto it = rendered.find(target);
        if (it == rendered.end()) {
            throw Error(ErrorCode::MissingFile, "no rendered image for target view " + std::to_string(target));
        }
        const SceneView &tv = manifest.views[target];
        const ReferenceSelection sel = select_reference(tv.camera, inputs, opts);
        const int ref = manifest.input_indices[sel.view_index];
        result.pairs.push_back(CuratedPair{target, ref, it->second, manifest.resolve(tv.image),
                                           manifest.resolve(manifest.views[ref].image), tv.camera,
                                           manifest.views[ref].camera, sel.score});
    }
    return result;
}

} // namespace prosplat
