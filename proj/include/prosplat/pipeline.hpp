// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"
#include "prosplat/feature_grid.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace prosplat::pipeline {

namespace fs = std::filesystem;

/// Parameters shared by every subcommand. Outputs are a deterministic
/// function of the inputs and the seed.
struct PipelineConfig {
    fs::path scene;
    fs::path out = "out";
    int sh_degree = 0;
    int depth_candidates = 32;
    int latent_scale = 8;
    bool softmax = true;
    bool sigmoid = true;
    bool literal_fmatrix = false;
    std::uint64_t seed = 0;
    std::optional<fs::path> mask;

    // Subcommand-specific.
    std::optional<fs::path> primitives;  ///< render: overrides the manifest entry
    Vec3 background = Vec3::Zero();      ///< render
    bool all_views = false;              ///< render: every view, not only targets
    int latent_channels = 8;             ///< fuse
    std::optional<fs::path> pred;        ///< eval: single-pair mode
    std::optional<fs::path> gt;          ///< eval: single-pair mode
    std::optional<fs::path> pred_dir;    ///< eval: scene mode, defaults to <out>/render
    int views = 3;                       ///< make-scene
    int width = 64;                      ///< make-scene
    int height = 48;                     ///< make-scene
};

/// Subcommand names accepted by run().
const std::vector<std::string> &subcommands();

/// Executes one subcommand, writing artifacts under config.out and a summary
/// to `log`. Library errors propagate as prosplat::Error.
void run(const std::string &subcommand, const PipelineConfig &config, std::ostream &log);

void render(const PipelineConfig &config, std::ostream &log);
void select_ref(const PipelineConfig &config, std::ostream &log);
void epimap(const PipelineConfig &config, std::ostream &log);
void costvol(const PipelineConfig &config, std::ostream &log);
void fuse(const PipelineConfig &config, std::ostream &log);
void eval(const PipelineConfig &config, std::ostream &log);
void curate(const PipelineConfig &config, std::ostream &log);
/// Writes a synthetic scene (manifest, poses, ground-truth images, and a
/// perturbed primitive file) into config.out.
void make_scene(const PipelineConfig &config, std::ostream &log);

/// Pseudo-encoder: box-downsample by `scale`, then lift RGB to `channels`
/// with a seeded linear map. decode_latent applies its pseudo-inverse and
/// upsamples back to width x height.
struct LatentCodec {
    Eigen::MatrixXd lift;   ///< channels x 3
    Eigen::MatrixXd unlift; ///< 3 x channels

    static LatentCodec make(int channels, std::uint64_t seed);
    FeatureGrid encode(const Image &image, int scale) const;
    Image decode(const FeatureGrid &latent, int width, int height) const;
};

/// Conventional artifact name for a view index, e.g. view_002.png.
std::string view_file(int index, const char *ext = ".png");

} // namespace prosplat::pipeline
