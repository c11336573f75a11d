// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"
#include "prosplat/gaussian.hpp"
#include "prosplat/image.hpp"

#include <optional>
#include <span>
#include <vector>

namespace prosplat {

struct ProjectionOptions {
    int sh_degree = 0;
    /// Added to both diagonal entries of the projected covariance (pixel^2).
    double dilation = 0.0;
};

/// Screen-space footprint of one primitive.
struct SplatProjection {
    Vec2 mean2d;
    Mat2 cov2d;
    double depth = 0.0;
    Vec3 color;
};

/// Projects a primitive through the EWA approximation cov2d = J W Sigma W^T J^T,
/// W being the view rotation and J the perspective Jacobian at the mean.
/// Throws BehindCamera when the camera-space depth is <= near.
SplatProjection project_covariance(const GaussianPrimitive &prim, const CameraView &view,
                                   const ProjectionOptions &opts = {});

/// Non-throwing variant used by the rasteriser; nullopt when culled.
std::optional<SplatProjection> try_project(const GaussianPrimitive &prim, const CameraView &view,
                                           const ProjectionOptions &opts = {});

struct RenderSettings {
    Vec3 background = Vec3::Zero();
    int sh_degree = 0;
    double dilation = 0.3;
    /// Splats contribute only within this many standard deviations.
    double cutoff_sigma = 3.0;
    /// Per-splat effective alpha ceiling; must lie in (0, 1].
    double max_alpha = 0.999;
    int tile_size = 16;
};

struct FrameBuffer {
    int width = 0;
    int height = 0;
    Image rgb;
    /// 1 - final transmittance, per pixel.
    std::vector<double> accumulated_alpha;

    Vec3 pixel(int x, int y) const { return {rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2)}; }
    double alpha(int x, int y) const { return accumulated_alpha[static_cast<std::size_t>(y) * width + x]; }
};

/// Front-to-back alpha compositing of depth-sorted splats. The result does not
/// depend on the order of `prims`: splats are sorted by depth, ties broken by
/// comparing primitive parameters and finally the input index.
FrameBuffer render_view(std::span<const GaussianPrimitive> prims, const CameraView &view,
                        const RenderSettings &settings = {});

/// One splat's contribution at a pixel. The effective alpha is opacity * falloff,
/// falloff being the Gaussian weight exp(-0.5 d^T cov2d^-1 d).
struct SplatSample {
    Vec3 color = Vec3::Zero();
    double opacity = 0.0;
    double falloff = 1.0;

    double effective_alpha() const { return opacity * falloff; }
};

struct SplatGradient {
    /// dC/dc_i, identical for every colour channel.
    double d_color = 0.0;
    /// dC/d(effective alpha_i), per channel.
    Vec3 d_effective_alpha = Vec3::Zero();
    /// dC/d(opacity_i) = falloff_i * dC/d(effective alpha_i).
    Vec3 d_opacity = Vec3::Zero();
};

/// C = sum_i c_i a_i prod_{j<i} (1 - a_j) + background * prod_j (1 - a_j).
Vec3 composite(std::span<const SplatSample> sorted, const Vec3 &background = Vec3::Zero());

/// Analytic partial derivatives of composite() for a depth-sorted stack.
std::vector<SplatGradient> compositing_gradients(std::span<const SplatSample> sorted,
                                                 const Vec3 &background = Vec3::Zero());

} // namespace prosplat
