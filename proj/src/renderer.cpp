// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/renderer.hpp"

#include "prosplat/error.hpp"
#include "prosplat/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace prosplat {

namespace {

struct Footprint {
    SplatProjection proj;
    Mat2 conic;
    double opacity = 0.0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0; // inclusive pixel bounds
    std::size_t index = 0;
};

// Lexicographic comparison over the full parameter set; 0 when identical.
int compare_parameters(const GaussianPrimitive &a, const GaussianPrimitive &b) {
    auto cmp = [](double x, double y) { return x < y ? -1 : (y < x ? 1 : 0); };
    for (int k = 0; k < 3; ++k) {
        if (int c = cmp(a.mu[k], b.mu[k])) return c;
        if (int c = cmp(a.s[k], b.s[k])) return c;
    }
    for (int k = 0; k < 4; ++k) {
        if (int c = cmp(a.q.coeffs()[k], b.q.coeffs()[k])) return c;
    }
    if (int c = cmp(a.alpha, b.alpha)) return c;
    if (a.sh.size() != b.sh.size()) return a.sh.size() < b.sh.size() ? -1 : 1;
    for (std::size_t k = 0; k < a.sh.size(); ++k) {
        if (int c = cmp(a.sh[k], b.sh[k])) return c;
    }
    return 0;
}

} // namespace

std::optional<SplatProjection> try_project(const GaussianPrimitive &prim, const CameraView &view,
                                           const ProjectionOptions &opts) {
    const Mat3 &w = view.extrinsics().rotation();
    const Vec3 t = view.extrinsics().to_camera(prim.mu);
    if (!(t.z() > view.near())) return std::nullopt;

    const auto &k = view.intrinsics();
    const double inv_z = 1.0 / t.z();
    Eigen::Matrix<double, 2, 3> jac;
    jac << k.fx() * inv_z, 0.0, -k.fx() * t.x() * inv_z * inv_z, //
        0.0, k.fy() * inv_z, -k.fy() * t.y() * inv_z * inv_z;

    const Eigen::Matrix<double, 2, 3> jw = jac * w;
    Mat2 cov2d = jw * prim.covariance() * jw.transpose();
    cov2d(1, 0) = cov2d(0, 1);
    cov2d(0, 0) += opts.dilation;
    cov2d(1, 1) += opts.dilation;

    const Vec3 dir = (prim.mu - camera_center(view.extrinsics())).normalized();
    return SplatProjection{view.project_camera_point(t), cov2d, t.z(), evaluate_sh(prim.sh, dir, opts.sh_degree)};
}

SplatProjection project_covariance(const GaussianPrimitive &prim, const CameraView &view,
                                   const ProjectionOptions &opts) {
    auto proj = try_project(prim, view, opts);
    if (!proj) {
        std::ostringstream msg;
        msg << "primitive at depth " << view.extrinsics().to_camera(prim.mu).z() << " is not beyond near plane "
            << view.near();
        throw Error(ErrorCode::BehindCamera, msg.str());
    }
    return *proj;
}

FrameBuffer render_view(std::span<const GaussianPrimitive> prims, const CameraView &view,
                        const RenderSettings &settings) {
    if (!(settings.max_alpha > 0.0 && settings.max_alpha <= 1.0) || settings.tile_size < 1 ||
        !(settings.cutoff_sigma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "render settings out of range");
    }
    const int width = view.intrinsics().width();
    const int height = view.intrinsics().height();
    const ProjectionOptions popts{settings.sh_degree, settings.dilation};
    const double cutoff_sq = settings.cutoff_sigma * settings.cutoff_sigma;

    std::vector<Footprint> splats;
    splats.reserve(prims.size());
    for (std::size_t i = 0; i < prims.size(); ++i) {
        validate(prims[i]);
        auto proj = try_project(prims[i], view, popts);
        if (!proj) continue;
        const double det = proj->cov2d.determinant();
        if (!(det > 0.0)) continue;
        // Bounding box of the cutoff ellipse: half-extent sqrt(cutoff^2 * Sigma_kk).
        const double rx = std::sqrt(cutoff_sq * proj->cov2d(0, 0));
        const double ry = std::sqrt(cutoff_sq * proj->cov2d(1, 1));
        // Pixel (x, y) has centre (x + 0.5, y + 0.5).
        const double fx0 = std::ceil(proj->mean2d.x() - rx - 0.5);
        const double fx1 = std::floor(proj->mean2d.x() + rx - 0.5);
        const double fy0 = std::ceil(proj->mean2d.y() - ry - 0.5);
        const double fy1 = std::floor(proj->mean2d.y() + ry - 0.5);
        if (!(fx1 >= 0.0 && fy1 >= 0.0 && fx0 < width && fy0 < height)) continue;
        Footprint fp;
        fp.proj = *proj;
        fp.conic = proj->cov2d.inverse();
        fp.opacity = prims[i].alpha;
        fp.x0 = static_cast<int>(std::max(0.0, fx0));
        fp.y0 = static_cast<int>(std::max(0.0, fy0));
        fp.x1 = static_cast<int>(std::min<double>(width - 1, fx1));
        fp.y1 = static_cast<int>(std::min<double>(height - 1, fy1));
        fp.index = i;
        splats.push_back(fp);
    }

    std::sort(splats.begin(), splats.end(), [&](const Footprint &a, const Footprint &b) {
        if (a.proj.depth != b.proj.depth) return a.proj.depth < b.proj.depth;
        if (int c = compare_parameters(prims[a.index], prims[b.index])) return c < 0;
        return a.index < b.index;
    });

    const int ts = settings.tile_size;
    const int tiles_x = (width + ts - 1) / ts;
    const int tiles_y = (height + ts - 1) / ts;
    std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (std::uint32_t s = 0; s < splats.size(); ++s) {
        const auto &fp = splats[s];
        for (int ty = fp.y0 / ts; ty <= fp.y1 / ts; ++ty) {
            for (int tx = fp.x0 / ts; tx <= fp.x1 / ts; ++tx) {
                bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(s);
            }
        }
    }

    FrameBuffer fb{width, height, Image(width, height, 3), std::vector<double>(static_cast<std::size_t>(width) * height)};
    parallel_for(bins.size(), [&](std::size_t tile) {
        const int tx = static_cast<int>(tile) % tiles_x;
        const int ty = static_cast<int>(tile) / tiles_x;
        const auto &bin = bins[tile];
        for (int y = ty * ts; y < std::min(height, (ty + 1) * ts); ++y) {
            for (int x = tx * ts; x < std::min(width, (tx + 1) * ts); ++x) {
                const Vec2 centre(x + 0.5, y + 0.5);
                Vec3 colour = Vec3::Zero();
                double transmittance = 1.0;
                for (std::uint32_t s : bin) {
                    const auto &fp = splats[s];
                    if (x < fp.x0 || x > fp.x1 || y < fp.y0 || y > fp.y1) continue;
                    const Vec2 delta = centre - fp.proj.mean2d;
                    const double maha = delta.dot(fp.conic * delta);
                    if (maha > cutoff_sq) continue;
                    const double a = std::min(settings.max_alpha, fp.opacity * std::exp(-0.5 * maha));
                    colour += fp.proj.color * (a * transmittance);
                    transmittance *= 1.0 - a;
                }
                colour += settings.background * transmittance;
                for (int c = 0; c < 3; ++c) fb.rgb.at(x, y, c) = colour[c];
                fb.accumulated_alpha[static_cast<std::size_t>(y) * width + x] = 1.0 - transmittance;
            }
        }
    });
    return fb;
}

Vec3 composite(std::span<const SplatSample> sorted, const Vec3 &background) {
    Vec3 colour = Vec3::Zero();
    double transmittance = 1.0;
    for (const auto &s : sorted) {
        const double a = s.effective_alpha();
        colour += s.color * (a * transmittance);
        transmittance *= 1.0 - a;
    }
    return colour + background * transmittance;
}

std::vector<SplatGradient> compositing_gradients(std::span<const SplatSample> sorted, const Vec3 &background) {
    const std::size_t n = sorted.size();
    std::vector<SplatGradient> grads(n);

    // transmittance[i] = prod_{j<i} (1 - a_j)
    std::vector<double> transmittance(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        transmittance[i + 1] = transmittance[i] * (1.0 - sorted[i].effective_alpha());
    }

    // behind = colour seen through splat i, i.e. what splats i+1.. and the
    // background composite to on their own. dC/da_i = T_i (c_i - behind).
    Vec3 behind = background;
    for (std::size_t r = n; r-- > 0;) {
        const auto &s = sorted[r];
        const double a = s.effective_alpha();
        grads[r].d_color = a * transmittance[r];
        grads[r].d_effective_alpha = transmittance[r] * (s.color - behind);
        grads[r].d_opacity = s.falloff * grads[r].d_effective_alpha;
        behind = s.color * a + behind * (1.0 - a);
    }
    return grads;
}

} // namespace prosplat
