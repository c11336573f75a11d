// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

// Test-only generators and independent reference computations. Nothing here
// calls into the code paths it is used to check.

#pragma once

#include "prosplat/camera.hpp"
#include "prosplat/feature_grid.hpp"
#include "prosplat/plane_sweep.hpp"
#include "prosplat/random.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace prosplat::testing {

inline Mat3 random_rotation(SeededStream &rng) {
    Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    return q.normalized().toRotationMatrix();
}

inline Vec3 random_vec(SeededStream &rng, double lo, double hi) {
    return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

inline CameraIntrinsics random_intrinsics(SeededStream &rng, int width = 640, int height = 480) {
    return CameraIntrinsics(rng.uniform(300, 800), rng.uniform(300, 800), rng.uniform(0.3, 0.7) * width,
                            rng.uniform(0.3, 0.7) * height, width, height);
}

/// Camera at `centre` whose optical axis points at `look_at`, with a random roll.
inline CameraView look_at_camera(SeededStream &rng, const Vec3 &centre, const Vec3 &look_at, int width = 640,
                                 int height = 480) {
    const Vec3 z = (look_at - centre).normalized();
    Vec3 hint = random_vec(rng, -1, 1);
    const Vec3 x = hint.cross(z).normalized();
    const Vec3 y = z.cross(x);
    Mat3 r;
    r.row(0) = x.transpose();
    r.row(1) = y.transpose();
    r.row(2) = z.transpose();
    return CameraView(random_intrinsics(rng, width, height), CameraExtrinsics(r, -r * centre), 0.1, 100.0);
}

/// Inverse of the full 4x4 world-to-camera matrix; its translation column is
/// the camera centre.
inline Vec3 centre_by_matrix_inverse(const Mat3 &r, const Vec3 &t) {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = r;
    m.topRightCorner<3, 1>() = t;
    const Mat4 inv = m.inverse();
    return inv.topRightCorner<3, 1>();
}

/// Pixel coordinates by direct pinhole projection from world space.
inline Vec2 project_world(const CameraView &cam, const Vec3 &world) {
    const Vec3 pc = cam.extrinsics().rotation() * world + cam.extrinsics().translation();
    const auto &k = cam.intrinsics();
    return {k.fx() * pc.x() / pc.z() + k.cx(), k.fy() * pc.y() / pc.z() + k.cy()};
}

/// Central finite difference of a scalar function.
inline double central_difference(const std::function<double(double)> &f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// |a - b| relative to max(|a|, |b|, floor).
inline double relative_error(double a, double b, double floor = 1e-6) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// The same camera after moving the whole world by x' = q x + u.
inline CameraView transform_camera(const CameraView &cam, const Mat3 &q, const Vec3 &u) {
    const Mat3 r = cam.extrinsics().rotation() * q.transpose();
    const Vec3 t = cam.extrinsics().translation() - r * u;
    return CameraView(cam.intrinsics(), CameraExtrinsics(r, t), cam.near(), cam.far());
}

/// Procedural texture on the world plane z = plane_z, seen by `cam` on a grid
/// that matches its image. Channels come in (cos, sin) pairs of one phase, so
/// every feature vector has the same norm and the dot product of two samples
/// peaks only where the phases agree.
struct PlaneTexture {
    std::vector<double> kx, ky, phase;

    PlaneTexture(SeededStream &rng, int pairs, double min_wavelength, double max_wavelength) {
        for (int k = 0; k < pairs; ++k) {
            const double angle = rng.uniform(-0.6, 0.6);
            const double freq = 2.0 * 3.14159265358979323846 / rng.uniform(min_wavelength, max_wavelength);
            kx.push_back(freq * std::cos(angle));
            ky.push_back(freq * std::sin(angle));
            phase.push_back(rng.uniform(0, 6.283185307179586));
        }
    }

    int channels() const { return 2 * static_cast<int>(kx.size()); }

    FeatureGrid render(const CameraView &cam, double plane_z) const {
        const auto &k = cam.intrinsics();
        FeatureGrid grid(k.height(), k.width(), channels());
        const Vec3 centre = camera_center(cam.extrinsics());
        for (int row = 0; row < grid.h; ++row) {
            for (int col = 0; col < grid.w; ++col) {
                const Vec3 ray_cam((col + 0.5 - k.cx()) / k.fx(), (row + 0.5 - k.cy()) / k.fy(), 1.0);
                const Vec3 ray = cam.extrinsics().rotation().transpose() * ray_cam;
                const Vec3 hit = centre + ray * ((plane_z - centre.z()) / ray.z());
                for (std::size_t c = 0; c < kx.size(); ++c) {
                    const double theta = kx[c] * hit.x() + ky[c] * hit.y() + phase[c];
                    grid.at(row, col, static_cast<int>(2 * c)) = std::cos(theta);
                    grid.at(row, col, static_cast<int>(2 * c + 1)) = std::sin(theta);
                }
            }
        }
        return grid;
    }
};

/// Fraction of reference cells, valid at the true candidate, whose cost-volume
/// argmax lands on that candidate.
inline double argmax_hit_rate(const CostVolume &vol, int true_index) {
    int valid = 0, hits = 0;
    for (int p = 0; p < vol.h * vol.w; ++p) {
        if (!vol.is_valid(p, true_index)) continue;
        ++valid;
        if (vol.argmax(p) == true_index) ++hits;
    }
    return valid == 0 ? 0.0 : static_cast<double>(hits) / valid;
}

/// Attention chain evaluated with scalar loops: softmax(q k^T / sqrt(dk)) per
/// row, times per-row min-max of exp(-d) (constant rows become ones), through
/// a sigmoid, then summed against the values. Returns cells x value channels.
inline std::vector<std::vector<double>> attention_scalar_oracle(const FeatureGrid &tgt, const FeatureGrid &ref,
                                                                const Eigen::MatrixXd &d, const Eigen::MatrixXd &wq,
                                                                const Eigen::MatrixXd &wk, const Eigen::MatrixXd &wv,
                                                                bool softmax = true, bool sigmoid = true) {
    const int np = tgt.h * tgt.w, nq = ref.h * ref.w;
    const int dk = static_cast<int>(wq.cols()), dv = static_cast<int>(wv.cols());
    auto project = [](const FeatureGrid &g, int p, const Eigen::MatrixXd &m, int j) {
        double acc = 0.0;
        for (int ch = 0; ch < g.c; ++ch) acc += g.data[static_cast<std::size_t>(p) * g.c + ch] * m(ch, j);
        return acc;
    };
    std::vector<std::vector<double>> out(np, std::vector<double>(dv, 0.0));
    for (int p = 0; p < np; ++p) {
        std::vector<double> logits(nq);
        for (int q = 0; q < nq; ++q) {
            double dot = 0.0;
            for (int j = 0; j < dk; ++j) dot += project(tgt, p, wq, j) * project(ref, q, wk, j);
            logits[q] = dot / std::sqrt(static_cast<double>(dk));
        }
        if (softmax) {
            double peak = logits[0];
            for (double l : logits) peak = std::max(peak, l);
            double total = 0.0;
            for (double &l : logits) total += (l = std::exp(l - peak));
            for (double &l : logits) l /= total;
        }
        double lo = std::exp(-d(p, 0)), hi = lo;
        for (int q = 0; q < nq; ++q) {
            lo = std::min(lo, std::exp(-d(p, q)));
            hi = std::max(hi, std::exp(-d(p, q)));
        }
        for (int q = 0; q < nq; ++q) {
            const double mod = hi > lo ? (std::exp(-d(p, q)) - lo) / (hi - lo) : 1.0;
            double g = logits[q] * mod;
            if (sigmoid) g = 1.0 / (1.0 + std::exp(-g));
            for (int j = 0; j < dv; ++j) out[p][j] += g * project(ref, q, wv, j);
        }
    }
    return out;
}

} // namespace prosplat::testing
