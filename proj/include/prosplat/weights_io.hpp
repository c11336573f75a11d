// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/attention.hpp"

#include <filesystem>
#include <string>

namespace prosplat {

/// Weight bundles use the safetensors layout: an 8-byte little-endian header
/// length N, N bytes of JSON describing each tensor
///   {"wq": {"dtype": "F32", "shape": [c, dk], "data_offsets": [begin, end]}, ...}
/// followed by the flat little-endian float32 payload. Tensor names are
/// wq, wk, wv, dsc2x.depthwise [c, 3, 3], dsc2x.pointwise [c, c] and the
/// matching dsc4x entries.
std::string serialize_weights(const ProjectionWeights &w);
ProjectionWeights deserialize_weights(const std::string &bytes);

void save_weights(const std::filesystem::path &path, const ProjectionWeights &w);
ProjectionWeights load_weights(const std::filesystem::path &path);

} // namespace prosplat
