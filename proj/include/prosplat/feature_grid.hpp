// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/epipolar.hpp"
#include "prosplat/image.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace prosplat {

/// h x w x c dense features, row-major with interleaved channels. Stands in
/// for encoder latents and multi-view features.
struct FeatureGrid {
    int h = 0;
    int w = 0;
    int c = 0;
    std::vector<double> data;

    FeatureGrid() = default;
    FeatureGrid(int h_, int w_, int c_, double fill = 0.0)
        : h(h_), w(w_), c(c_), data(static_cast<std::size_t>(h_) * w_ * c_, fill) {}

    GridSize dims() const { return {h, w}; }
    int cells() const { return h * w; }
    std::size_t index(int row, int col, int ch) const {
        return (static_cast<std::size_t>(row) * w + col) * c + ch;
    }
    double &at(int row, int col, int ch) { return data[index(row, col, ch)]; }
    double at(int row, int col, int ch) const { return data[index(row, col, ch)]; }

    std::span<double> cell(int p) { return {data.data() + static_cast<std::size_t>(p) * c, static_cast<std::size_t>(c)}; }
    std::span<const double> cell(int p) const {
        return {data.data() + static_cast<std::size_t>(p) * c, static_cast<std::size_t>(c)};
    }

    bool same_shape(const FeatureGrid &o) const { return h == o.h && w == o.w && c == o.c; }
};

/// Throws ShapeMismatch unless h, w, c >= 1 and every entry is finite.
void validate(const FeatureGrid &grid);

/// Bilinear sample at continuous cell coordinates (cell centres at integers),
/// zero outside the grid. Writes c values into out.
void sample_bilinear_zero(const FeatureGrid &grid, double col, double row, std::span<double> out);

/// Resizes with half-pixel-centre bilinear interpolation, clamping at borders.
FeatureGrid resize_bilinear(const FeatureGrid &grid, int out_h, int out_w);

/// Box-filter downsampling of an image by an integer factor (dimensions are
/// floored) into a feature grid with the same channel count.
FeatureGrid downsample_image(const Image &image, int factor);

FeatureGrid to_feature_grid(const Image &image);
Image to_image(const FeatureGrid &grid);

} // namespace prosplat
