// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/epipolar.hpp"
#include "prosplat/feature_grid.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>

namespace prosplat {

enum class NormScope { PerRow, Global };

struct AttentionConfig {
    int dk = 8;
    bool apply_softmax = true;
    bool apply_sigmoid = true;
    /// Image-to-feature-grid downsampling factor; one of 1, 2, 4, 8.
    int latent_scale = 8;
    NormScope norm_scope = NormScope::PerRow;
};

void validate(const AttentionConfig &cfg);

/// 3x3 depthwise kernels followed by a 1x1 pointwise channel mix.
struct SeparableConv {
    /// channels x 9, kernel rows stored row-major; applied as cross-correlation.
    Eigen::MatrixXd depthwise;
    /// out x in.
    Eigen::MatrixXd pointwise;

    int channels() const { return static_cast<int>(depthwise.rows()); }
};

struct ProjectionWeights {
    Eigen::MatrixXd wq; ///< c x dk
    Eigen::MatrixXd wk; ///< c x dk
    Eigen::MatrixXd wv; ///< c x dv, dv is the fused channel count
    SeparableConv stage2x;
    SeparableConv stage4x;

    int channels() const { return static_cast<int>(wq.rows()); }
    int key_dim() const { return static_cast<int>(wq.cols()); }
    int value_dim() const { return static_cast<int>(wv.cols()); }

    /// Deterministic weights from a seed: projections uniform in +-1/sqrt(c),
    /// depthwise kernels near a centre delta, pointwise near identity. Every
    /// value is exactly representable in float32.
    static ProjectionWeights random(int channels, int dk, std::uint64_t seed);
};

/// Throws ShapeMismatch when shapes are inconsistent with `channels`.
void validate(const ProjectionWeights &w, int channels);

/// Norm(exp(-d)): min-max normalisation to [0, 1]; constant rows (or a constant
/// map under NormScope::Global) become all ones.
Eigen::MatrixXd distance_modulation(const Eigen::MatrixXd &d, NormScope scope);

/// Intermediate matrices of one attention pass, target cells x reference cells.
struct AttentionTrace {
    Eigen::MatrixXd attn_g;
    Eigen::MatrixXd modulation;
    Eigen::MatrixXd attn_comb;
    Eigen::MatrixXd gate;
};

/// Distance-weighted epipolar attention, forward pass:
///   attn_g    = softmax_rows(Q K^T / sqrt(dk))     (softmax optional)
///   attn_comb = attn_g * Norm(exp(-d))             (elementwise)
///   gate      = sigmoid(attn_comb)                 (optional)
///   out(p)    = sum_q gate[p, q] V(q)
/// with Q = tgt Wq, K = ref Wk, V = ref Wv. The residual add onto tgt is left
/// to the caller (see add_residual).
FeatureGrid dwea_attention(const FeatureGrid &tgt, const FeatureGrid &ref, const EpipolarDistanceMap &dmap,
                           const ProjectionWeights &w, const AttentionConfig &cfg, AttentionTrace *trace = nullptr);

/// tgt + fused; throws ShapeMismatch when shapes differ.
FeatureGrid add_residual(const FeatureGrid &tgt, const FeatureGrid &fused);

/// Depthwise 3x3 (zero padded) then pointwise 1x1.
FeatureGrid depthwise_separable(const FeatureGrid &in, const SeparableConv &conv);

struct InjectedFeatures {
    FeatureGrid up2x;
    FeatureGrid up4x;
};

/// Bilinear 2x and 4x upsampling of the fused latent, each refined by its
/// depthwise-separable convolution.
InjectedFeatures fuse_and_inject(const FeatureGrid &fused, const ProjectionWeights &w);

/// One-step enhancement of a target latent. Implementations must return a
/// latent of the same shape; enhance() enforces it.
class DenoisingBackend {
public:
    virtual ~DenoisingBackend() = default;

    FeatureGrid enhance(const FeatureGrid &tgt_latent, std::span<const FeatureGrid> injected, double timestep) const;

protected:
    virtual FeatureGrid do_enhance(const FeatureGrid &tgt_latent, std::span<const FeatureGrid> injected,
                                   double timestep) const = 0;
};

/// Default backend: returns the latent plus every injection resampled to the
/// latent resolution. Runs without pretrained weights.
class IdentityBackend final : public DenoisingBackend {
protected:
    FeatureGrid do_enhance(const FeatureGrid &tgt_latent, std::span<const FeatureGrid> injected,
                           double timestep) const override;
};

} // namespace prosplat
