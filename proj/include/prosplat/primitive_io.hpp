// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/gaussian.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace prosplat {

/// Primitive files are JSON:
///   {"primitives": [{"mu": [x, y, z], "sh": [...], "q": [w, x, y, z],
///                    "s": [sx, sy, sz], "alpha": a}, ...]}
/// An empty (or whitespace-only) file is an empty scene. Quaternions are
/// normalised on load; every primitive is validated.
std::vector<GaussianPrimitive> parse_primitives(const std::string &text);
std::string serialize_primitives(const std::vector<GaussianPrimitive> &prims);

std::vector<GaussianPrimitive> load_primitives(const std::filesystem::path &path);
void save_primitives(const std::filesystem::path &path, const std::vector<GaussianPrimitive> &prims);

} // namespace prosplat
