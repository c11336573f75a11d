// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/error.hpp"
#include "prosplat/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

namespace {

int report(const std::string &code, const std::string &message, int status) {
    std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << std::endl;
    return status;
}

} // namespace

int main(int argc, char **argv) {
    using prosplat::pipeline::PipelineConfig;
    PipelineConfig config;
    std::string background = "0,0,0";
    std::string mask, primitives, pred, gt, pred_dir;

    CLI::App app{"Wide-baseline splatting toolkit: rendering, reference selection, epipolar maps, "
                 "plane sweeps, attention fusion, metrics and dataset curation"};
    app.require_subcommand(1);

    auto common = [&](CLI::App *sub, bool needs_scene) {
        auto *scene = sub->add_option("--scene", config.scene, "Scene manifest (JSON)");
        if (needs_scene) scene->required()->check(CLI::ExistingFile);
        sub->add_option("--out", config.out, "Output directory")->capture_default_str();
        sub->add_option("--sh-degree", config.sh_degree, "Spherical-harmonics degree")->check(CLI::Range(0, 3))->capture_default_str();
        sub->add_option("--depth-candidates", config.depth_candidates, "Plane-sweep depth count")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--latent-scale", config.latent_scale, "Image-to-latent downsampling")->check(CLI::IsMember({1, 2, 4, 8}))->capture_default_str();
        sub->add_flag("--no-softmax", [&](std::int64_t) { config.softmax = false; }, "Skip the attention softmax");
        sub->add_flag("--no-sigmoid", [&](std::int64_t) { config.sigmoid = false; }, "Skip the sigmoid gate");
        sub->add_flag("--literal-fmatrix", config.literal_fmatrix, "Use the untransposed K_ref^-1 fundamental-matrix variant");
        sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
        sub->add_option("--mask", mask, "Validity mask image (nonzero = valid)")->check(CLI::ExistingFile);
    };

    auto *render = app.add_subcommand("render", "Splat a primitive file into the target views");
    common(render, true);
    render->add_option("--primitives", primitives, "Primitive file (overrides the manifest)")->check(CLI::ExistingFile);
    render->add_option("--background", background, "Background colour r,g,b in [0,1]")->capture_default_str();
    render->add_flag("--all-views", config.all_views, "Render every view, not only targets");

    common(app.add_subcommand("select-ref", "Print the reference-selection score table"), true);
    common(app.add_subcommand("epimap", "Write epipolar distance maps for each target"), true);
    common(app.add_subcommand("costvol", "Write plane-sweep cost-volume slices"), true);
    auto *fuse = app.add_subcommand("fuse", "Run epipolar attention fusion with the default backend");
    common(fuse, true);
    fuse->add_option("--latent-channels", config.latent_channels, "Latent channel count")->check(CLI::Range(3, 256))->capture_default_str();

    auto *eval = app.add_subcommand("eval", "PSNR / SSIM report as JSON");
    common(eval, false);
    eval->add_option("--pred", pred, "Predicted image (single-pair mode)")->check(CLI::ExistingFile);
    eval->add_option("--gt", gt, "Ground-truth image (single-pair mode)")->check(CLI::ExistingFile);
    eval->add_option("--pred-dir", pred_dir, "Directory of predicted target views (default <out>/render)");

    common(app.add_subcommand("curate", "Emit curated target/reference training pairs"), true);

    auto *make_scene = app.add_subcommand("make-scene", "Generate a synthetic scene");
    common(make_scene, false);
    make_scene->add_option("--views", config.views, "Number of views (first and last are inputs)")->check(CLI::Range(3, 1000))->capture_default_str();
    make_scene->add_option("--width", config.width, "Image width")->check(CLI::Range(8, 4096))->capture_default_str();
    make_scene->add_option("--height", config.height, "Image height")->check(CLI::Range(8, 4096))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return report("UsageError", e.what(), 2);
    }

    try {
        if (!mask.empty()) config.mask = mask;
        if (!primitives.empty()) config.primitives = primitives;
        if (!pred.empty()) config.pred = pred;
        if (!gt.empty()) config.gt = gt;
        if (!pred_dir.empty()) config.pred_dir = pred_dir;
        {
            std::vector<double> rgb;
            std::stringstream ss(background);
            for (std::string item; std::getline(ss, item, ',');) rgb.push_back(std::stod(item));
            if (rgb.size() != 3) return report("UsageError", "--background expects r,g,b", 2);
            config.background = prosplat::Vec3(rgb[0], rgb[1], rgb[2]);
        }
        prosplat::pipeline::run(app.get_subcommands().front()->get_name(), config, std::cout);
    } catch (const prosplat::Error &e) {
        return report(std::string(prosplat::to_string(e.code())), e.what(), 1);
    } catch (const std::exception &e) {
        return report("InternalError", e.what(), 1);
    }
    return 0;
}
