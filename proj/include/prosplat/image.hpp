// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/error.hpp"

#include <cstddef>
#include <vector>

namespace prosplat {

/// Dense height x width x channels image, row-major with interleaved channels.
/// Values are unconstrained doubles; file I/O maps [0, 1] to 8-bit.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;

    Image() = default;
    Image(int width_, int height_, int channels_, double fill = 0.0)
        : width(width_), height(height_), channels(channels_),
          data(static_cast<std::size_t>(width_) * height_ * channels_, fill) {}

    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    double &at(int x, int y, int c) { return data[index(x, y, c)]; }
    double at(int x, int y, int c) const { return data[index(x, y, c)]; }

    bool same_shape(const Image &other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

inline void require_same_shape(const Image &a, const Image &b, const char *what) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": image shapes differ");
    }
}

} // namespace prosplat
