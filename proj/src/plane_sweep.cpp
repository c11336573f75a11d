// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/plane_sweep.hpp"

#include "prosplat/error.hpp"
#include "prosplat/parallel.hpp"

#include <cmath>
#include <sstream>

namespace prosplat {

std::vector<double> sample_depth_candidates(double near, double far, int count, DepthSpacing spacing) {
    if (!(near > 0.0 && near < far && std::isfinite(far)) || count < 1) {
        std::ostringstream msg;
        msg << "invalid depth range near=" << near << " far=" << far << " count=" << count;
        throw Error(ErrorCode::InvalidRange, msg.str());
    }
    std::vector<double> depths(count, near);
    if (count == 1) return depths;
    for (int m = 1; m + 1 < count; ++m) {
        const double t = static_cast<double>(m) / (count - 1);
        depths[m] = spacing == DepthSpacing::Inverse ? 1.0 / ((1.0 - t) / near + t / far) : near + t * (far - near);
    }
    depths.back() = far;
    return depths;
}

WarpedFeature warp_feature(const FeatureGrid &src, const CameraView &src_view, const CameraView &dst_view,
                           double depth, GridSize dst_grid) {
    if (!(depth > 0.0) || !std::isfinite(depth)) throw Error(ErrorCode::InvalidRange, "warp depth must be positive");
    if (dst_grid.h < 1 || dst_grid.w < 1) throw Error(ErrorCode::ShapeMismatch, "empty destination grid");

    WarpedFeature out{FeatureGrid(dst_grid.h, dst_grid.w, src.c), std::vector<std::uint8_t>(dst_grid.cells(), 0)};
    const auto &kd = dst_view.intrinsics();
    const auto &ks = src_view.intrinsics();
    const double to_grid_x = static_cast<double>(src.w) / ks.width();
    const double to_grid_y = static_cast<double>(src.h) / ks.height();

    parallel_for(static_cast<std::size_t>(dst_grid.h), [&](std::size_t row_index) {
        const int row = static_cast<int>(row_index);
        for (int col = 0; col < dst_grid.w; ++col) {
            const Vec2 px = grid_cell_to_pixel(row, col, dst_grid.h, dst_grid.w, kd.width(), kd.height());
            const Vec3 world = dst_view.extrinsics().to_world(dst_view.unproject(px, depth));
            const Vec3 cam = src_view.extrinsics().to_camera(world);
            if (!(cam.z() > 0.0)) continue;
            const Vec2 proj = src_view.project_camera_point(cam);
            const double gx = proj.x() * to_grid_x;
            const double gy = proj.y() * to_grid_y;
            const int p = row * dst_grid.w + col;
            if (gx >= 0.0 && gx < src.w && gy >= 0.0 && gy < src.h) out.valid[p] = 1;
            sample_bilinear_zero(src, gx - 0.5, gy - 0.5, out.features.cell(p));
        }
    });
    return out;
}

WarpedFeature warp_feature(const FeatureGrid &src, const CameraView &src_view, const CameraView &dst_view,
                           double depth) {
    return warp_feature(src, src_view, dst_view, depth, src.dims());
}

int CostVolume::argmax(int p) const {
    int best = 0;
    for (int m = 1; m < depth_count; ++m) {
        if (at(p, m) > at(p, best)) best = m;
    }
    return best;
}

CostVolume build_cost_volume(const FeatureGrid &ref_feat, const CameraView &ref_view,
                             std::span<const FeatureGrid> other_feats, std::span<const CameraView> other_views,
                             std::span<const double> depths) {
    validate(ref_feat);
    if (other_feats.size() != other_views.size()) {
        throw Error(ErrorCode::ShapeMismatch, "one camera is required per feature grid");
    }
    if (other_feats.empty()) throw Error(ErrorCode::EmptyInputSet, "cost volume needs at least one other view");
    for (const auto &f : other_feats) {
        if (!f.same_shape(ref_feat)) throw Error(ErrorCode::ShapeMismatch, "feature grids must share h, w, c");
    }
    if (depths.empty()) throw Error(ErrorCode::InvalidRange, "no depth candidates");
    for (std::size_t m = 0; m < depths.size(); ++m) {
        if (!(depths[m] > 0.0) || (m > 0 && !(depths[m] > depths[m - 1]))) {
            throw Error(ErrorCode::InvalidRange, "depth candidates must be positive and strictly increasing");
        }
    }

    const int cells = ref_feat.cells();
    const int count = static_cast<int>(depths.size());
    CostVolume vol;
    vol.h = ref_feat.h;
    vol.w = ref_feat.w;
    vol.depth_count = count;
    vol.depths.assign(depths.begin(), depths.end());
    vol.values.assign(static_cast<std::size_t>(cells) * count, 0.0);
    vol.valid.assign(static_cast<std::size_t>(cells) * count, 1);

    const double inv_views = 1.0 / static_cast<double>(other_feats.size());
    const double inv_c = 1.0 / ref_feat.c;
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t m) {
        for (std::size_t v = 0; v < other_feats.size(); ++v) {
            const WarpedFeature warped = warp_feature(other_feats[v], other_views[v], ref_view, depths[m], ref_feat.dims());
            for (int p = 0; p < cells; ++p) {
                const auto a = warped.features.cell(p);
                const auto b = ref_feat.cell(p);
                double dot = 0.0;
                for (int ch = 0; ch < ref_feat.c; ++ch) dot += a[ch] * b[ch];
                const std::size_t idx = static_cast<std::size_t>(p) * count + m;
                vol.values[idx] += dot * inv_c * inv_views;
                if (!warped.valid[p]) vol.valid[idx] = 0;
            }
        }
    });
    return vol;
}

} // namespace prosplat
