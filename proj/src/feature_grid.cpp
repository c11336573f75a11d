// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/feature_grid.hpp"

#include <algorithm>
#include <cmath>

namespace prosplat {

void validate(const FeatureGrid &grid) {
    if (grid.h < 1 || grid.w < 1 || grid.c < 1 ||
        grid.data.size() != static_cast<std::size_t>(grid.h) * grid.w * grid.c) {
        throw Error(ErrorCode::ShapeMismatch, "feature grid has an empty or inconsistent shape");
    }
    for (double v : grid.data) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "feature grid has non-finite entries");
    }
}

void sample_bilinear_zero(const FeatureGrid &grid, double col, double row, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double c0f = std::floor(col);
    const double r0f = std::floor(row);
    const double tx = col - c0f;
    const double ty = row - r0f;
    const int c0 = static_cast<int>(c0f);
    const int r0 = static_cast<int>(r0f);
    const double weights[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    const int cols[4] = {c0, c0 + 1, c0, c0 + 1};
    const int rows[4] = {r0, r0, r0 + 1, r0 + 1};
    for (int k = 0; k < 4; ++k) {
        if (weights[k] == 0.0) continue;
        if (cols[k] < 0 || cols[k] >= grid.w || rows[k] < 0 || rows[k] >= grid.h) continue;
        const double *src = grid.data.data() + grid.index(rows[k], cols[k], 0);
        for (int ch = 0; ch < grid.c; ++ch) out[ch] += weights[k] * src[ch];
    }
}

FeatureGrid resize_bilinear(const FeatureGrid &grid, int out_h, int out_w) {
    FeatureGrid out(out_h, out_w, grid.c);
    const double sy = static_cast<double>(grid.h) / out_h;
    const double sx = static_cast<double>(grid.w) / out_w;
    for (int r = 0; r < out_h; ++r) {
        const double fy = std::clamp((r + 0.5) * sy - 0.5, 0.0, grid.h - 1.0);
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, grid.h - 1);
        const double ty = fy - y0;
        for (int col = 0; col < out_w; ++col) {
            const double fx = std::clamp((col + 0.5) * sx - 0.5, 0.0, grid.w - 1.0);
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, grid.w - 1);
            const double tx = fx - x0;
            for (int ch = 0; ch < grid.c; ++ch) {
                const double top = (1 - tx) * grid.at(y0, x0, ch) + tx * grid.at(y0, x1, ch);
                const double bottom = (1 - tx) * grid.at(y1, x0, ch) + tx * grid.at(y1, x1, ch);
                out.at(r, col, ch) = (1 - ty) * top + ty * bottom;
            }
        }
    }
    return out;
}

FeatureGrid downsample_image(const Image &image, int factor) {
    if (factor < 1 || image.width / factor < 1 || image.height / factor < 1) {
        throw Error(ErrorCode::InvalidArgument, "downsampling factor too large for image");
    }
    FeatureGrid out(image.height / factor, image.width / factor, image.channels);
    const double norm = 1.0 / (factor * factor);
    for (int r = 0; r < out.h; ++r) {
        for (int col = 0; col < out.w; ++col) {
            for (int ch = 0; ch < out.c; ++ch) {
                double sum = 0.0;
                for (int dy = 0; dy < factor; ++dy) {
                    for (int dx = 0; dx < factor; ++dx) sum += image.at(col * factor + dx, r * factor + dy, ch);
                }
                out.at(r, col, ch) = sum * norm;
            }
        }
    }
    return out;
}

FeatureGrid to_feature_grid(const Image &image) {
    FeatureGrid out(image.height, image.width, image.channels);
    out.data = image.data;
    return out;
}

Image to_image(const FeatureGrid &grid) {
    Image out(grid.w, grid.h, grid.c);
    out.data = grid.data;
    return out;
}

} // namespace prosplat
