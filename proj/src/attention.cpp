// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/attention.hpp"

#include "prosplat/error.hpp"
#include "prosplat/parallel.hpp"
#include "prosplat/random.hpp"

#include <cmath>
#include <sstream>

namespace prosplat {

namespace {

Eigen::MatrixXd random_matrix(SeededStream &rng, int rows, int cols, double bound) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform_f32(-bound, bound);
    }
    return m;
}

SeparableConv random_conv(SeededStream &rng, int channels) {
    SeparableConv conv;
    conv.depthwise = random_matrix(rng, channels, 9, 0.05);
    conv.depthwise.col(4).array() += 1.0;
    conv.pointwise = random_matrix(rng, channels, channels, 0.05);
    conv.pointwise.diagonal().array() += 1.0;
    conv.depthwise = conv.depthwise.cast<float>().cast<double>();
    conv.pointwise = conv.pointwise.cast<float>().cast<double>();
    return conv;
}

Eigen::MatrixXd as_matrix(const FeatureGrid &grid) {
    Eigen::MatrixXd m(grid.cells(), grid.c);
    for (int p = 0; p < grid.cells(); ++p) {
        const auto cell = grid.cell(p);
        for (int ch = 0; ch < grid.c; ++ch) m(p, ch) = cell[ch];
    }
    return m;
}

void shape_error(const std::string &what) { throw Error(ErrorCode::ShapeMismatch, what); }

// Integer-factor reductions use box averaging, anything else bilinear.
FeatureGrid resample_to(const FeatureGrid &grid, int h, int w) {
    if (grid.h == h && grid.w == w) return grid;
    if (grid.h % h == 0 && grid.w % w == 0 && grid.h / h == grid.w / w) {
        return downsample_image(to_image(grid), grid.h / h);
    }
    return resize_bilinear(grid, h, w);
}

} // namespace

void validate(const AttentionConfig &cfg) {
    const bool scale_ok = cfg.latent_scale == 1 || cfg.latent_scale == 2 || cfg.latent_scale == 4 || cfg.latent_scale == 8;
    if (cfg.dk < 1 || !scale_ok) {
        std::ostringstream msg;
        msg << "invalid attention config dk=" << cfg.dk << " latent_scale=" << cfg.latent_scale;
        throw Error(ErrorCode::InvalidArgument, msg.str());
    }
}

ProjectionWeights ProjectionWeights::random(int channels, int dk, std::uint64_t seed) {
    if (channels < 1 || dk < 1) throw Error(ErrorCode::InvalidArgument, "weights need positive dimensions");
    SeededStream rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(channels));
    ProjectionWeights w;
    w.wq = random_matrix(rng, channels, dk, bound);
    w.wk = random_matrix(rng, channels, dk, bound);
    w.wv = random_matrix(rng, channels, channels, bound);
    w.stage2x = random_conv(rng, channels);
    w.stage4x = random_conv(rng, channels);
    return w;
}

void validate(const ProjectionWeights &w, int channels) {
    if (w.wq.rows() != channels || w.wk.rows() != channels || w.wv.rows() != channels) {
        shape_error("projection weights must have one row per feature channel");
    }
    if (w.wq.cols() < 1 || w.wq.cols() != w.wk.cols() || w.wv.cols() < 1) {
        shape_error("query and key projections must share a positive width");
    }
    for (const SeparableConv *conv : {&w.stage2x, &w.stage4x}) {
        if (conv->depthwise.rows() != w.wv.cols() || conv->depthwise.cols() != 9 ||
            conv->pointwise.rows() != w.wv.cols() || conv->pointwise.cols() != w.wv.cols()) {
            shape_error("separable convolution shapes must match the fused channel count");
        }
    }
    const bool finite = w.wq.allFinite() && w.wk.allFinite() && w.wv.allFinite() &&
                        w.stage2x.depthwise.allFinite() && w.stage2x.pointwise.allFinite() &&
                        w.stage4x.depthwise.allFinite() && w.stage4x.pointwise.allFinite();
    if (!finite) throw Error(ErrorCode::InvalidArgument, "projection weights contain non-finite values");
}

Eigen::MatrixXd distance_modulation(const Eigen::MatrixXd &d, NormScope scope) {
    Eigen::MatrixXd m = (-d.array()).exp().matrix();
    auto normalise = [](auto &&block) {
        const double lo = block.minCoeff();
        const double hi = block.maxCoeff();
        if (hi > lo) {
            block = (block.array() - lo) / (hi - lo);
        } else {
            block.setOnes();
        }
    };
    if (scope == NormScope::Global) {
        normalise(m);
    } else {
        for (Eigen::Index r = 0; r < m.rows(); ++r) normalise(m.row(r));
    }
    return m;
}

FeatureGrid dwea_attention(const FeatureGrid &tgt, const FeatureGrid &ref, const EpipolarDistanceMap &dmap,
                           const ProjectionWeights &w, const AttentionConfig &cfg, AttentionTrace *trace) {
    validate(cfg);
    validate(tgt);
    validate(ref);
    if (tgt.c != ref.c) shape_error("target and reference channel counts differ");
    validate(w, tgt.c);
    if (w.key_dim() != cfg.dk) shape_error("projection width does not match dk");
    if (!(dmap.target_dims == tgt.dims()) || !(dmap.ref_dims == ref.dims()) || dmap.d.rows() != tgt.cells() ||
        dmap.d.cols() != ref.cells()) {
        shape_error("distance map dimensions do not match the feature grids");
    }

    const Eigen::MatrixXd q = as_matrix(tgt) * w.wq;
    const Eigen::MatrixXd k = as_matrix(ref) * w.wk;
    const Eigen::MatrixXd v = as_matrix(ref) * w.wv;

    Eigen::MatrixXd attn = (q * k.transpose()) / std::sqrt(static_cast<double>(cfg.dk));
    if (cfg.apply_softmax) {
        for (Eigen::Index r = 0; r < attn.rows(); ++r) {
            auto row = attn.row(r);
            row = (row.array() - row.maxCoeff()).exp();
            row /= row.sum();
        }
    }
    const Eigen::MatrixXd modulation = distance_modulation(dmap.d, cfg.norm_scope);
    const Eigen::MatrixXd comb = attn.cwiseProduct(modulation);
    Eigen::MatrixXd gate = comb;
    if (cfg.apply_sigmoid) gate = (1.0 / (1.0 + (-comb.array()).exp())).matrix();

    const Eigen::MatrixXd fused = gate * v;
    FeatureGrid out(tgt.h, tgt.w, static_cast<int>(fused.cols()));
    for (int p = 0; p < out.cells(); ++p) {
        auto cell = out.cell(p);
        for (int ch = 0; ch < out.c; ++ch) cell[ch] = fused(p, ch);
    }
    if (trace) *trace = AttentionTrace{attn, modulation, comb, gate};
    return out;
}

FeatureGrid add_residual(const FeatureGrid &tgt, const FeatureGrid &fused) {
    if (!tgt.same_shape(fused)) shape_error("residual add needs identical shapes");
    FeatureGrid out = tgt;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += fused.data[i];
    return out;
}

FeatureGrid depthwise_separable(const FeatureGrid &in, const SeparableConv &conv) {
    if (conv.channels() != in.c || conv.depthwise.cols() != 9 || conv.pointwise.rows() != in.c ||
        conv.pointwise.cols() != in.c) {
        shape_error("separable convolution does not match input channels");
    }
    FeatureGrid depthwise(in.h, in.w, in.c);
    parallel_for(static_cast<std::size_t>(in.h), [&](std::size_t row_index) {
        const int r = static_cast<int>(row_index);
        for (int col = 0; col < in.w; ++col) {
            for (int ch = 0; ch < in.c; ++ch) {
                double acc = 0.0;
                for (int ky = 0; ky < 3; ++ky) {
                    const int y = r + ky - 1;
                    if (y < 0 || y >= in.h) continue;
                    for (int kx = 0; kx < 3; ++kx) {
                        const int x = col + kx - 1;
                        if (x < 0 || x >= in.w) continue;
                        acc += conv.depthwise(ch, ky * 3 + kx) * in.at(y, x, ch);
                    }
                }
                depthwise.at(r, col, ch) = acc;
            }
        }
    });

    FeatureGrid out(in.h, in.w, in.c);
    for (int p = 0; p < in.cells(); ++p) {
        const auto src = depthwise.cell(p);
        auto dst = out.cell(p);
        for (int o = 0; o < in.c; ++o) {
            double acc = 0.0;
            for (int i = 0; i < in.c; ++i) acc += conv.pointwise(o, i) * src[i];
            dst[o] = acc;
        }
    }
    return out;
}

InjectedFeatures fuse_and_inject(const FeatureGrid &fused, const ProjectionWeights &w) {
    validate(fused);
    return {depthwise_separable(resize_bilinear(fused, fused.h * 2, fused.w * 2), w.stage2x),
            depthwise_separable(resize_bilinear(fused, fused.h * 4, fused.w * 4), w.stage4x)};
}

FeatureGrid DenoisingBackend::enhance(const FeatureGrid &tgt_latent, std::span<const FeatureGrid> injected,
                                      double timestep) const {
    for (const auto &inj : injected) {
        if (inj.c != tgt_latent.c) shape_error("injected features must match the latent channel count");
    }
    FeatureGrid out = do_enhance(tgt_latent, injected, timestep);
    if (!out.same_shape(tgt_latent)) shape_error("denoising backend changed the latent shape");
    return out;
}

FeatureGrid IdentityBackend::do_enhance(const FeatureGrid &tgt_latent, std::span<const FeatureGrid> injected,
                                        double /*timestep*/) const {
    FeatureGrid out = tgt_latent;
    for (const auto &inj : injected) {
        const FeatureGrid resampled = resample_to(inj, tgt_latent.h, tgt_latent.w);
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += resampled.data[i];
    }
    return out;
}

} // namespace prosplat
