// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace prosplat {

namespace {

void check_mask(const Image &image, MaskRef mask) {
    if (mask && (mask->width != image.width || mask->height != image.height || mask->channels != 1)) {
        throw Error(ErrorCode::ShapeMismatch, "mask must be a single-channel image of the same size");
    }
}

bool valid(MaskRef mask, int x, int y) { return !mask || mask->at(x, y, 0) != 0.0; }

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(size);
    const double centre = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        w[i] = std::exp(-((i - centre) * (i - centre)) / (2.0 * sigma * sigma));
        sum += w[i];
    }
    for (double &v : w) v /= sum;
    return w;
}

// Separable "valid" filtering of a single-channel plane.
std::vector<double> filter_valid(const std::vector<double> &plane, int width, int height,
                                 const std::vector<double> &kernel) {
    const int k = static_cast<int>(kernel.size());
    const int ow = width - k + 1;
    const int oh = height - k + 1;
    std::vector<double> horiz(static_cast<std::size_t>(height) * ow);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += kernel[i] * plane[static_cast<std::size_t>(y) * width + x + i];
            horiz[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += kernel[i] * horiz[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    }
    return out;
}

} // namespace

double mse(const Image &a, const Image &b, MaskRef mask) {
    require_same_shape(a, b, "mse");
    check_mask(a, mask);
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (!valid(mask, x, y)) continue;
            for (int c = 0; c < a.channels; ++c) {
                const double d = a.at(x, y, c) - b.at(x, y, c);
                sum += d * d;
            }
            count += static_cast<std::size_t>(a.channels);
        }
    }
    if (count == 0) throw Error(ErrorCode::InvalidArgument, "mse over an empty region");
    return sum / static_cast<double>(count);
}

double psnr(const Image &a, const Image &b, double max_val, MaskRef mask) {
    const double err = mse(a, b, mask);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(max_val * max_val / err);
}

double ssim(const Image &a, const Image &b, const SsimOptions &opts, MaskRef mask) {
    require_same_shape(a, b, "ssim");
    check_mask(a, mask);
    if (std::min(a.width, a.height) < opts.window) {
        std::ostringstream msg;
        msg << "image " << a.width << "x" << a.height << " is smaller than the " << opts.window << "px SSIM window";
        throw Error(ErrorCode::ImageTooSmall, msg.str());
    }
    const auto kernel = gaussian_window(opts.window, opts.sigma);
    const double c1 = (opts.k1 * opts.data_range) * (opts.k1 * opts.data_range);
    const double c2 = (opts.k2 * opts.data_range) * (opts.k2 * opts.data_range);
    const int ow = a.width - opts.window + 1;
    const int oh = a.height - opts.window + 1;
    const int half = opts.window / 2;
    const std::size_t n = static_cast<std::size_t>(a.width) * a.height;

    double total = 0.0;
    std::size_t count = 0;
    std::vector<double> pa(n), pb(n), paa(n), pbb(n), pab(n);
    for (int c = 0; c < a.channels; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            pa[i] = a.data[i * a.channels + c];
            pb[i] = b.data[i * b.channels + c];
            paa[i] = pa[i] * pa[i];
            pbb[i] = pb[i] * pb[i];
            pab[i] = pa[i] * pb[i];
        }
        const auto mu_a = filter_valid(pa, a.width, a.height, kernel);
        const auto mu_b = filter_valid(pb, a.width, a.height, kernel);
        const auto e_aa = filter_valid(paa, a.width, a.height, kernel);
        const auto e_bb = filter_valid(pbb, a.width, a.height, kernel);
        const auto e_ab = filter_valid(pab, a.width, a.height, kernel);
        for (int y = 0; y < oh; ++y) {
            for (int x = 0; x < ow; ++x) {
                if (!valid(mask, x + half, y + half)) continue;
                const std::size_t i = static_cast<std::size_t>(y) * ow + x;
                const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
                const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
                const double cov = e_ab[i] - mu_a[i] * mu_b[i];
                const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
                const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
                total += num / den;
                ++count;
            }
        }
    }
    if (count == 0) throw Error(ErrorCode::InvalidArgument, "ssim over an empty region");
    return total / static_cast<double>(count);
}

LossBreakdown improvement_loss(const Image &enh, const Image &gt, const PerceptualTerm &perceptual, MaskRef mask) {
    LossBreakdown out;
    out.mse = mse(enh, gt, mask);
    if (perceptual) {
        out.perceptual = perceptual(enh, gt);
    } else {
        out.perceptual_defaulted = true;
    }
    out.total = out.mse + out.lambda * out.perceptual;
    return out;
}

LossBreakdown joint_loss(std::span<const std::pair<Image, Image>> pairs, const PerceptualTerm &perceptual,
                         MaskRef mask) {
    if (pairs.empty()) throw Error(ErrorCode::EmptyBatch, "joint loss needs at least one view");
    LossBreakdown sum;
    for (const auto &[enh, gt] : pairs) {
        const LossBreakdown one = improvement_loss(enh, gt, perceptual, mask);
        sum.mse += one.mse;
        sum.perceptual += one.perceptual;
        sum.total += one.total;
        sum.perceptual_defaulted = sum.perceptual_defaulted || one.perceptual_defaulted;
    }
    return sum;
}

} // namespace prosplat
