// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/image.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace prosplat {

/// Optional per-pixel validity mask (width x height x 1, nonzero = valid).
/// A null mask selects every pixel.
using MaskRef = const Image *;

/// Mean squared error over all channels of the valid pixels.
double mse(const Image &a, const Image &b, MaskRef mask = nullptr);

/// 10 log10(max_val^2 / MSE). Identical images give +infinity.
/// Throws ShapeMismatch when dimensions differ.
double psnr(const Image &a, const Image &b, double max_val = 1.0, MaskRef mask = nullptr);

struct SsimOptions {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    /// Dynamic range L of the pixel values.
    double data_range = 1.0;
};

/// Mean local SSIM with a Gaussian window, evaluated at every window position
/// that fits entirely inside the image and averaged over channels. With a
/// mask, only windows whose centre pixel is valid are averaged.
/// Throws ShapeMismatch or ImageTooSmall.
double ssim(const Image &a, const Image &b, const SsimOptions &opts = {}, MaskRef mask = nullptr);

/// Perceptual distance plugged into the improvement loss.
using PerceptualTerm = std::function<double(const Image &, const Image &)>;

inline constexpr double kPerceptualWeight = 5.0;

struct LossBreakdown {
    double mse = 0.0;
    double perceptual = 0.0;
    double lambda = kPerceptualWeight;
    double total = 0.0;
    /// Set when no perceptual term was supplied and 0 was used in its place.
    bool perceptual_defaulted = false;
};

/// MSE + lambda * perceptual with lambda = 5.
LossBreakdown improvement_loss(const Image &enh, const Image &gt, const PerceptualTerm &perceptual = {},
                               MaskRef mask = nullptr);

/// Sum of improvement_loss over every (enhanced, ground truth) pair.
/// Throws EmptyBatch for an empty list.
LossBreakdown joint_loss(std::span<const std::pair<Image, Image>> pairs, const PerceptualTerm &perceptual = {},
                         MaskRef mask = nullptr);

} // namespace prosplat
