// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/epipolar.hpp"

#include "prosplat/error.hpp"
#include "prosplat/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace prosplat {

namespace {

constexpr double kMinBaseline = 1e-12;
constexpr double kMinLineNormSq = 1e-18;

} // namespace

RelativePose relative_pose(const CameraExtrinsics &tgt, const CameraExtrinsics &ref) {
    // x_ref = R_ref R_tgt^T (x_tgt - T_tgt) + T_ref
    const Mat3 rotation = ref.rotation() * tgt.rotation().transpose();
    return {rotation, ref.translation() - rotation * tgt.translation()};
}

Mat3 fundamental_matrix(const CameraView &tgt, const CameraView &ref, const FundamentalOptions &opts) {
    const RelativePose rel = relative_pose(tgt.extrinsics(), ref.extrinsics());
    const double baseline = rel.translation.norm();
    if (!(baseline > kMinBaseline)) {
        std::ostringstream msg;
        msg << "camera centres coincide (baseline " << baseline << ")";
        throw Error(ErrorCode::DegenerateBaseline, msg.str());
    }

    Mat3 f;
    if (opts.literal_form) {
        const Vec3 t = ref.extrinsics().translation() -
                       tgt.extrinsics().rotation().transpose() * tgt.extrinsics().translation();
        f = ref.intrinsics().inverse() * skew(t) * ref.extrinsics().rotation() *
            tgt.extrinsics().rotation().transpose() * tgt.intrinsics().inverse();
    } else {
        const Mat3 essential = skew(rel.translation) * rel.rotation;
        f = ref.intrinsics().inverse().transpose() * essential * tgt.intrinsics().inverse();
    }
    const double norm = f.norm();
    if (!(norm > 0.0)) throw Error(ErrorCode::DegenerateBaseline, "fundamental matrix vanished");
    return f / norm;
}

EpipolarDistanceMap epipolar_distance_map(const CameraView &tgt, const CameraView &ref, GridSize tgt_grid,
                                          GridSize ref_grid, const EpipolarMapOptions &opts) {
    if (tgt_grid.h < 1 || tgt_grid.w < 1 || ref_grid.h < 1 || ref_grid.w < 1) {
        throw Error(ErrorCode::InvalidArgument, "distance map grids must be nonempty");
    }
    const Mat3 f = fundamental_matrix(tgt, ref, opts.fundamental);

    const auto &kt = tgt.intrinsics();
    const auto &kr = ref.intrinsics();
    // Reference cell centres in grid units: pixel x = (u + 0.5) * sx.
    const double sx = static_cast<double>(kr.width()) / ref_grid.w;
    const double sy = static_cast<double>(kr.height()) / ref_grid.h;

    EpipolarDistanceMap map{tgt_grid, ref_grid, Eigen::MatrixXd(tgt_grid.cells(), ref_grid.cells()), {}};
    std::vector<char> degenerate(tgt_grid.cells(), 0);

    parallel_for(static_cast<std::size_t>(tgt_grid.cells()), [&](std::size_t p) {
        const int row = static_cast<int>(p) / tgt_grid.w;
        const int col = static_cast<int>(p) % tgt_grid.w;
        const Vec2 px = grid_cell_to_pixel(row, col, tgt_grid.h, tgt_grid.w, kt.width(), kt.height());
        const Vec3 line = f * Vec3(px.x(), px.y(), 1.0);
        // Line re-expressed over reference grid coordinates (u, v).
        const double a = line.x() * sx;
        const double b = line.y() * sy;
        const double c = line.z() + 0.5 * (a + b);
        const double norm_sq = a * a + b * b;
        if (line.x() * line.x() + line.y() * line.y() < kMinLineNormSq) {
            degenerate[p] = 1;
            return;
        }
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        for (int v = 0; v < ref_grid.h; ++v) {
            for (int u = 0; u < ref_grid.w; ++u) {
                map.d(static_cast<Eigen::Index>(p), v * ref_grid.w + u) = std::abs(a * u + b * v + c) * inv_norm;
            }
        }
    });

    for (int p = 0; p < tgt_grid.cells(); ++p) {
        if (degenerate[p]) map.degenerate_rows.push_back(p);
    }
    if (!map.degenerate_rows.empty()) {
        double sentinel = 0.0;
        if (opts.degenerate_sentinel) {
            sentinel = *opts.degenerate_sentinel;
        } else {
            for (int p = 0; p < tgt_grid.cells(); ++p) {
                if (!degenerate[p]) sentinel = std::max(sentinel, map.d.row(p).maxCoeff());
            }
        }
        for (int p : map.degenerate_rows) map.d.row(p).setConstant(sentinel);
    }
    return map;
}

} // namespace prosplat
