// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/pipeline.hpp"

#include "prosplat/attention.hpp"
#include "prosplat/curation.hpp"
#include "prosplat/epipolar.hpp"
#include "prosplat/error.hpp"
#include "prosplat/image_io.hpp"
#include "prosplat/manifest.hpp"
#include "prosplat/metrics.hpp"
#include "prosplat/plane_sweep.hpp"
#include "prosplat/primitive_io.hpp"
#include "prosplat/random.hpp"
#include "prosplat/renderer.hpp"
#include "prosplat/view_select.hpp"
#include "prosplat/weights_io.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/LU>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace prosplat::pipeline {

namespace {

using nlohmann::json;

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// PSNR may be infinite, which JSON cannot carry as a number.
json metric_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

fs::path ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

SceneManifest load_scene(const PipelineConfig &config) {
    if (config.scene.empty()) throw Error(ErrorCode::InvalidArgument, "--scene is required");
    return load_scene_manifest(config.scene);
}

std::optional<Image> load_mask(const PipelineConfig &config) {
    if (!config.mask) return std::nullopt;
    const Image raw = read_image(*config.mask);
    Image mask(raw.width, raw.height, 1);
    for (int y = 0; y < raw.height; ++y) {
        for (int x = 0; x < raw.width; ++x) mask.at(x, y, 0) = raw.at(x, y, 0) > 0.0 ? 1.0 : 0.0;
    }
    return mask;
}

ReferenceSelection choose_reference(const SceneManifest &scene, int target) {
    const auto inputs = scene.cameras(scene.input_indices);
    ReferenceSelection sel = select_reference(scene.views[target].camera, inputs);
    sel.view_index = scene.input_indices[sel.view_index];
    return sel;
}

GridSize latent_grid(const CameraView &view, int scale) {
    const GridSize g{view.intrinsics().height() / scale, view.intrinsics().width() / scale};
    if (g.h < 1 || g.w < 1) throw Error(ErrorCode::InvalidArgument, "latent scale too large for the image size");
    return g;
}

Image normalised_gray(const std::vector<double> &values, int width, int height) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Image img(width, height, 1);
    for (std::size_t i = 0; i < values.size(); ++i) img.data[i] = hi > lo ? (values[i] - lo) / (hi - lo) : 0.0;
    return img;
}

json camera_json(const CameraView &cam) {
    const auto &k = cam.intrinsics();
    const auto &r = cam.extrinsics().rotation();
    const auto &t = cam.extrinsics().translation();
    return {{"fx", k.fx()}, {"fy", k.fy()}, {"cx", k.cx()}, {"cy", k.cy()},
            {"width", k.width()}, {"height", k.height()},
            {"R", {{r(0, 0), r(0, 1), r(0, 2)}, {r(1, 0), r(1, 1), r(1, 2)}, {r(2, 0), r(2, 1), r(2, 2)}}},
            {"T", {t.x(), t.y(), t.z()}}, {"near", cam.near()}, {"far", cam.far()}};
}

// Image features for plane sweeping: box-downsampled colour with each
// channel's image mean removed.
FeatureGrid sweep_features(const Image &image, int scale) {
    FeatureGrid f = downsample_image(image, scale);
    for (int ch = 0; ch < f.c; ++ch) {
        double mean = 0.0;
        for (int p = 0; p < f.cells(); ++p) mean += f.cell(p)[ch];
        mean /= f.cells();
        for (int p = 0; p < f.cells(); ++p) f.cell(p)[ch] -= mean;
    }
    return f;
}

} // namespace

std::string view_file(int index, const char *ext) {
    std::ostringstream s;
    s << "view_" << std::setw(3) << std::setfill('0') << index << ext;
    return s.str();
}

const std::vector<std::string> &subcommands() {
    static const std::vector<std::string> names = {"render", "select-ref", "epimap", "costvol",
                                                   "fuse",   "eval",       "curate", "make-scene"};
    return names;
}

void run(const std::string &subcommand, const PipelineConfig &config, std::ostream &log) {
    if (subcommand == "render") return render(config, log);
    if (subcommand == "select-ref") return select_ref(config, log);
    if (subcommand == "epimap") return epimap(config, log);
    if (subcommand == "costvol") return costvol(config, log);
    if (subcommand == "fuse") return fuse(config, log);
    if (subcommand == "eval") return eval(config, log);
    if (subcommand == "curate") return curate(config, log);
    if (subcommand == "make-scene") return make_scene(config, log);
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + subcommand);
}

void render(const PipelineConfig &config, std::ostream &log) {
    const SceneManifest scene = load_scene(config);
    fs::path prim_path;
    if (config.primitives) {
        prim_path = *config.primitives;
    } else if (scene.primitives) {
        prim_path = scene.resolve(*scene.primitives);
    } else {
        throw Error(ErrorCode::InvalidArgument, "no primitive file: pass --primitives or set it in the manifest");
    }
    const auto prims = load_primitives(prim_path);
    RenderSettings settings;
    settings.sh_degree = config.sh_degree;
    settings.background = config.background;

    std::vector<int> indices = scene.target_indices;
    if (config.all_views) {
        indices.clear();
        for (int i = 0; i < static_cast<int>(scene.views.size()); ++i) indices.push_back(i);
    }
    const fs::path dir = ensure_dir(config.out / "render");
    for (int idx : indices) {
        const FrameBuffer fb = render_view(prims, scene.views[idx].camera, settings);
        const fs::path file = dir / view_file(idx);
        write_image(file, fb.rgb);
        log << "rendered view " << idx << " (" << prims.size() << " primitives) -> " << file.string() << '\n';
    }
}

void select_ref(const PipelineConfig &config, std::ostream &log) {
    const SceneManifest scene = load_scene(config);
    const fs::path dir = ensure_dir(config.out / "select_ref");
    const auto inputs = scene.cameras(scene.input_indices);
    for (int target : scene.target_indices) {
        const ReferenceSelection sel = select_reference(scene.views[target].camera, inputs);
        std::ostringstream tsv;
        tsv << "view_index\tdist\tangle\tscore\tselected\n";
        for (const auto &s : sel.all) {
            tsv << scene.input_indices[s.view_index] << '\t' << num(s.dist) << '\t' << num(s.angle) << '\t'
                << num(s.score) << '\t' << (s.view_index == sel.view_index ? 1 : 0) << '\n';
        }
        write_text(dir / ("target_" + std::to_string(target) + ".tsv"), tsv.str());
        log << "# target " << target << '\n' << tsv.str();
    }
}

void epimap(const PipelineConfig &config, std::ostream &log) {
    const SceneManifest scene = load_scene(config);
    const fs::path dir = ensure_dir(config.out / "epimap");
    EpipolarMapOptions opts;
    opts.fundamental.literal_form = config.literal_fmatrix;
    for (int target : scene.target_indices) {
        const ReferenceSelection sel = choose_reference(scene, target);
        const CameraView &tcam = scene.views[target].camera;
        const CameraView &rcam = scene.views[sel.view_index].camera;
        const EpipolarDistanceMap map = epipolar_distance_map(tcam, rcam, latent_grid(tcam, config.latent_scale),
                                                              latent_grid(rcam, config.latent_scale), opts);
        const std::string stem = "target_" + std::to_string(target) + "_ref_" + std::to_string(sel.view_index);
        std::vector<double> values(map.d.size());
        for (Eigen::Index p = 0; p < map.d.rows(); ++p) {
            for (Eigen::Index q = 0; q < map.d.cols(); ++q) values[p * map.d.cols() + q] = map.d(p, q);
        }
        write_image(dir / (stem + ".png"),
                    normalised_gray(values, static_cast<int>(map.d.cols()), static_cast<int>(map.d.rows())));
        // Modulation exp(-d), per row min-max normalised, as the attention sees it.
        const Eigen::MatrixXd mod = distance_modulation(map.d, NormScope::PerRow);
        for (Eigen::Index p = 0; p < mod.rows(); ++p) {
            for (Eigen::Index q = 0; q < mod.cols(); ++q) values[p * mod.cols() + q] = mod(p, q);
        }
        write_image(dir / (stem + "_modulation.png"),
                    normalised_gray(values, static_cast<int>(mod.cols()), static_cast<int>(mod.rows())));
        const json summary = {{"target_index", target},
                              {"reference_index", sel.view_index},
                              {"target_dims", {map.target_dims.h, map.target_dims.w}},
                              {"ref_dims", {map.ref_dims.h, map.ref_dims.w}},
                              {"max_distance", map.d.maxCoeff()},
                              {"min_distance", map.d.minCoeff()},
                              {"degenerate_rows", map.degenerate_rows},
                              {"literal_fmatrix", config.literal_fmatrix}};
        write_text(dir / (stem + ".json"), summary.dump(2) + "\n");
        log << "epipolar map target " << target << " vs reference " << sel.view_index << ": " << map.d.rows() << "x"
            << map.d.cols() << " -> " << (dir / (stem + ".png")).string() << '\n';
    }
}

void costvol(const PipelineConfig &config, std::ostream &log) {
    const SceneManifest scene = load_scene(config);
    const fs::path dir = ensure_dir(config.out / "costvol");
    const auto depths = sample_depth_candidates(scene.near, scene.far, config.depth_candidates);

    std::vector<FeatureGrid> feats;
    for (int idx : scene.input_indices) {
        feats.push_back(sweep_features(read_image(scene.resolve(scene.views[idx].image)), config.latent_scale));
    }
    for (std::size_t i = 0; i < scene.input_indices.size(); ++i) {
        std::vector<FeatureGrid> others;
        std::vector<CameraView> other_views;
        for (std::size_t j = 0; j < scene.input_indices.size(); ++j) {
            if (j == i) continue;
            others.push_back(feats[j]);
            other_views.push_back(scene.views[scene.input_indices[j]].camera);
        }
        const int idx = scene.input_indices[i];
        const CostVolume vol = build_cost_volume(feats[i], scene.views[idx].camera, others, other_views, depths);

        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double v : vol.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const std::string stem = "view_" + std::to_string(idx);
        for (int m = 0; m < vol.depth_count; ++m) {
            Image slice(vol.w, vol.h, 1);
            for (int p = 0; p < vol.h * vol.w; ++p) slice.data[p] = hi > lo ? (vol.at(p, m) - lo) / (hi - lo) : 0.0;
            std::ostringstream name;
            name << stem << "_d" << std::setw(2) << std::setfill('0') << m << ".png";
            write_image(dir / name.str(), slice);
        }
        Image arg(vol.w, vol.h, 1);
        for (int p = 0; p < vol.h * vol.w; ++p) {
            arg.data[p] = vol.depth_count > 1 ? static_cast<double>(vol.argmax(p)) / (vol.depth_count - 1) : 0.0;
        }
        write_image(dir / (stem + "_argmax.png"), arg);
        const json summary = {{"view_index", idx}, {"depths", depths}, {"grid", {vol.h, vol.w}},
                              {"min_cost", lo}, {"max_cost", hi}};
        write_text(dir / (stem + ".json"), summary.dump(2) + "\n");
        log << "cost volume view " << idx << ": " << vol.h << "x" << vol.w << "x" << vol.depth_count << " -> "
            << dir.string() << '\n';
    }
}

LatentCodec LatentCodec::make(int channels, std::uint64_t seed) {
    if (channels < 3) throw Error(ErrorCode::InvalidArgument, "latent codec needs at least 3 channels");
    SeededStream rng(seed ^ 0x5EEDC0DEC0DEC0DEull);
    LatentCodec codec;
    codec.lift = Eigen::MatrixXd::Zero(channels, 3);
    for (int c = 0; c < channels; ++c) {
        for (int k = 0; k < 3; ++k) codec.lift(c, k) = rng.uniform_f32(-0.5, 0.5);
    }
    codec.lift.topRows<3>() += Eigen::Matrix3d::Identity();
    const Eigen::Matrix3d gram = codec.lift.transpose() * codec.lift;
    codec.unlift = gram.inverse() * codec.lift.transpose();
    return codec;
}

FeatureGrid LatentCodec::encode(const Image &image, int scale) const {
    if (image.channels != 3) throw Error(ErrorCode::ShapeMismatch, "latent codec expects RGB images");
    const FeatureGrid rgb = downsample_image(image, scale);
    FeatureGrid latent(rgb.h, rgb.w, static_cast<int>(lift.rows()));
    for (int p = 0; p < rgb.cells(); ++p) {
        const auto in = rgb.cell(p);
        const Eigen::Vector3d v(in[0], in[1], in[2]);
        const Eigen::VectorXd z = lift * v;
        auto out = latent.cell(p);
        for (int c = 0; c < latent.c; ++c) out[c] = z[c];
    }
    return latent;
}

Image LatentCodec::decode(const FeatureGrid &latent, int width, int height) const {
    if (latent.c != unlift.cols()) throw Error(ErrorCode::ShapeMismatch, "latent channel count does not match codec");
    FeatureGrid rgb(latent.h, latent.w, 3);
    for (int p = 0; p < latent.cells(); ++p) {
        const auto in = latent.cell(p);
        const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(in.data(), latent.c);
        const Eigen::Vector3d v = unlift * z;
        auto out = rgb.cell(p);
        for (int c = 0; c < 3; ++c) out[c] = v[c];
    }
    return to_image(resize_bilinear(rgb, height, width));
}

void fuse(const PipelineConfig &config, std::ostream &log) {
    const SceneManifest scene = load_scene(config);
    const fs::path dir = ensure_dir(config.out / "fuse");
    AttentionConfig cfg;
    cfg.dk = config.latent_channels;
    cfg.apply_softmax = config.softmax;
    cfg.apply_sigmoid = config.sigmoid;
    cfg.latent_scale = config.latent_scale;
    validate(cfg);

    const LatentCodec codec = LatentCodec::make(config.latent_channels, config.seed);
    const ProjectionWeights weights = ProjectionWeights::random(config.latent_channels, cfg.dk, config.seed);
    save_weights(dir / "weights.safetensors", weights);
    const IdentityBackend backend;
    EpipolarMapOptions opts;
    opts.fundamental.literal_form = config.literal_fmatrix;

    json summary = json::array();
    for (int target : scene.target_indices) {
        const ReferenceSelection sel = choose_reference(scene, target);
        const SceneView &tv = scene.views[target];
        const SceneView &rv = scene.views[sel.view_index];
        const fs::path rendered = config.out / "render" / view_file(target);
        const fs::path tgt_path = fs::exists(rendered) ? rendered : scene.resolve(tv.image);

        const FeatureGrid tgt = codec.encode(read_image(tgt_path), cfg.latent_scale);
        const FeatureGrid ref = codec.encode(read_image(scene.resolve(rv.image)), cfg.latent_scale);
        const EpipolarDistanceMap dmap = epipolar_distance_map(tv.camera, rv.camera, tgt.dims(), ref.dims(), opts);
        const FeatureGrid fused = dwea_attention(tgt, ref, dmap, weights, cfg);
        const FeatureGrid bottleneck = add_residual(tgt, fused);
        const InjectedFeatures injected = fuse_and_inject(fused, weights);
        const std::vector<FeatureGrid> stages = {injected.up2x, injected.up4x};
        const FeatureGrid enhanced = backend.enhance(bottleneck, stages, 1.0);

        const Image decoded = codec.decode(enhanced, tv.camera.intrinsics().width(), tv.camera.intrinsics().height());
        const fs::path file = dir / view_file(target);
        write_image(file, decoded);
        // Sigmoid-gated sums over all reference cells usually leave [0, 1];
        // a per-channel stretch keeps the structure visible.
        Image stretched = decoded;
        for (int c = 0; c < 3; ++c) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = c; i < decoded.data.size(); i += 3) {
                lo = std::min(lo, decoded.data[i]);
                hi = std::max(hi, decoded.data[i]);
            }
            for (std::size_t i = c; i < decoded.data.size(); i += 3) {
                stretched.data[i] = hi > lo ? (decoded.data[i] - lo) / (hi - lo) : 0.0;
            }
        }
        write_image(dir / view_file(target, "_stretched.png"), stretched);
        summary.push_back({{"target_index", target},
                           {"reference_index", sel.view_index},
                           {"target_source", tgt_path.filename().string()},
                           {"latent_dims", {enhanced.h, enhanced.w, enhanced.c}},
                           {"degenerate_rows", dmap.degenerate_rows},
                           {"output", file.filename().string()}});
        log << "fused target " << target << " with reference " << sel.view_index << " -> " << file.string() << '\n';
    }
    write_text(dir / "summary.json", json{{"softmax", cfg.apply_softmax},
                                          {"sigmoid", cfg.apply_sigmoid},
                                          {"latent_scale", cfg.latent_scale},
                                          {"latent_channels", config.latent_channels},
                                          {"seed", config.seed},
                                          {"views", summary}}
                                         .dump(2) +
                                         "\n");
}

void eval(const PipelineConfig &config, std::ostream &log) {
    const std::optional<Image> mask = load_mask(config);
    const Image *mask_ptr = mask ? &*mask : nullptr;

    struct Pair {
        std::optional<int> target;
        fs::path pred, gt;
    };
    std::vector<Pair> pairs;
    if (config.pred || config.gt) {
        if (!config.pred || !config.gt) throw Error(ErrorCode::InvalidArgument, "--pred and --gt go together");
        pairs.push_back({std::nullopt, *config.pred, *config.gt});
    } else {
        const SceneManifest scene = load_scene(config);
        const fs::path pred_dir = config.pred_dir.value_or(config.out / "render");
        for (int target : scene.target_indices) {
            pairs.push_back({target, pred_dir / view_file(target), scene.resolve(scene.views[target].image)});
        }
    }

    json views = json::array();
    double sum_psnr = 0.0, sum_ssim = 0.0, sum_mse = 0.0;
    for (const auto &pair : pairs) {
        const Image pred = read_image(pair.pred);
        const Image gt = read_image(pair.gt);
        const double p = psnr(pred, gt, 1.0, mask_ptr);
        const double s = ssim(pred, gt, {}, mask_ptr);
        const double e = mse(pred, gt, mask_ptr);
        sum_psnr += p;
        sum_ssim += s;
        sum_mse += e;
        json entry = {{"pred", pair.pred.string()}, {"gt", pair.gt.string()},
                      {"psnr", metric_value(p)}, {"ssim", s}, {"mse", e}};
        if (pair.target) entry["target_index"] = *pair.target;
        views.push_back(entry);
    }
    const double n = static_cast<double>(pairs.size());
    const json report = {{"views", views},
                         {"mean", {{"psnr", metric_value(sum_psnr / n)}, {"ssim", sum_ssim / n}, {"mse", sum_mse / n}}},
                         {"masked", mask.has_value()}};
    const std::string text = report.dump(2) + "\n";
    write_text(ensure_dir(config.out / "eval") / "metrics.json", text);
    log << text;
}

void curate(const PipelineConfig &config, std::ostream &log) {
    const SceneManifest scene = load_scene(config);
    std::map<int, fs::path> rendered;
    for (int target : scene.target_indices) {
        const fs::path file = config.out / "render" / view_file(target);
        if (fs::exists(file)) rendered[target] = file;
    }
    const CurationResult result = curate_pairs(scene, rendered);
    const fs::path dir = ensure_dir(config.out / "curate");
    json pairs = json::array();
    for (const auto &pair : result.pairs) {
        const fs::path pair_dir = ensure_dir(dir / ("target_" + std::to_string(pair.target_index)));
        const auto copy = [&](const fs::path &from, const char *name) {
            const fs::path to = pair_dir / (std::string(name) + from.extension().string());
            fs::copy_file(from, to, fs::copy_options::overwrite_existing);
            return fs::relative(to, dir).generic_string();
        };
        pairs.push_back({{"target_index", pair.target_index},
                         {"reference_index", pair.reference_index},
                         {"rendered", copy(pair.rendered, "rendered")},
                         {"ground_truth", copy(pair.ground_truth, "ground_truth")},
                         {"reference_image", copy(pair.reference_image, "reference")},
                         {"target_camera", camera_json(pair.target_camera)},
                         {"reference_camera", camera_json(pair.reference_camera)},
                         {"score", {{"dist", pair.score.dist}, {"angle", pair.score.angle}, {"score", pair.score.score}}}});
    }
    const json doc = {{"scene_id", scene.scene_id}, {"below_range", result.below_range}, {"pairs", pairs}};
    write_text(dir / "pairs.json", doc.dump(2) + "\n");
    log << "curated " << result.pairs.size() << " pairs" << (result.below_range ? " (below the 5-7 range)" : "")
        << " -> " << (dir / "pairs.json").string() << '\n';
}

void make_scene(const PipelineConfig &config, std::ostream &log) {
    if (config.views < 3) throw Error(ErrorCode::InvalidArgument, "a synthetic scene needs at least 3 views");
    const fs::path dir = ensure_dir(config.out);
    ensure_dir(dir / "images");
    SeededStream rng(config.seed);

    // Ground truth: a textured backdrop behind the origin plus foreground blobs.
    std::vector<GaussianPrimitive> truth;
    for (int iy = 0; iy < 14; ++iy) {
        for (int ix = 0; ix < 20; ++ix) {
            GaussianPrimitive p;
            p.mu = Vec3(-3.8 + 0.4 * ix, -2.6 + 0.4 * iy, 2.0);
            const Vec3 rgb(0.5 + 0.4 * std::sin(1.3 * ix), 0.5 + 0.4 * std::cos(0.9 * iy), 0.5 + 0.4 * std::sin(0.7 * (ix + iy)));
            p.sh = sh_from_rgb(rgb);
            p.s = Vec3(0.22, 0.22, 0.05);
            p.alpha = 0.95;
            truth.push_back(p);
        }
    }
    for (int i = 0; i < 40; ++i) {
        GaussianPrimitive p;
        p.mu = Vec3(rng.uniform(-1.2, 1.2), rng.uniform(-0.9, 0.9), rng.uniform(-0.8, 0.8));
        p.sh = sh_from_rgb(Vec3(rng.unit(), rng.unit(), rng.unit()));
        p.q = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(), rng.normal()).normalized();
        p.s = Vec3(rng.uniform(0.05, 0.25), rng.uniform(0.05, 0.25), rng.uniform(0.05, 0.25));
        p.alpha = rng.uniform(0.5, 1.0);
        truth.push_back(p);
    }

    // A degraded copy stands in for a generator's prediction.
    std::vector<GaussianPrimitive> predicted;
    for (const auto &p : truth) {
        if (rng.unit() < 0.1) continue;
        GaussianPrimitive q = p;
        q.mu += Vec3(rng.normal(), rng.normal(), rng.normal()) * 0.03;
        Vec3 colour = evaluate_sh(p.sh, Vec3::UnitZ(), 0);
        colour += Vec3(rng.normal(), rng.normal(), rng.normal()) * 0.05;
        q.sh = sh_from_rgb(colour.cwiseMax(0.0).cwiseMin(1.0));
        predicted.push_back(q);
    }

    SceneManifest scene;
    scene.scene_id = "synthetic-" + std::to_string(config.seed);
    scene.root = dir;
    scene.image_width = config.width;
    scene.image_height = config.height;
    scene.near = 0.5;
    scene.far = 20.0;
    scene.pose_file = "poses.txt";
    scene.pose_header = "synthetic://prosplat/" + scene.scene_id;
    scene.primitives = "primitives.json";

    const std::array<double, 4> normalized = {0.875, 0.875 * config.width / config.height, 0.5, 0.5};
    RenderSettings settings;
    for (int i = 0; i < config.views; ++i) {
        const double theta = -0.5 + static_cast<double>(i) / (config.views - 1);
        const Vec3 centre(4.0 * std::sin(theta), -0.4, -4.0 * std::cos(theta));
        const Vec3 z = (-centre).normalized();
        const Vec3 x = Vec3::UnitY().cross(z).normalized();
        const Vec3 y = z.cross(x);
        Mat3 r;
        r.row(0) = x.transpose();
        r.row(1) = y.transpose();
        r.row(2) = z.transpose();
        Mat34 rt;
        rt.leftCols<3>() = r;
        rt.col(3) = -r * centre;
        PoseRecord rec = make_pose_record(i * 33366.0, normalized, rt, config.width, config.height);
        const CameraView cam(rec.intrinsics, rec.extrinsics, scene.near, scene.far);
        const std::string image = "images/" + view_file(i);
        write_image(dir / image, render_view(truth, cam, settings).rgb);
        scene.poses.push_back(rec);
        scene.views.push_back({image, cam, rec.timestamp});
        if (i == 0 || i == config.views - 1) {
            scene.input_indices.push_back(i);
        } else {
            scene.target_indices.push_back(i);
        }
    }
    save_primitives(dir / "primitives.json", predicted);
    save_scene_manifest(dir / "manifest.json", scene);
    log << "wrote synthetic scene " << scene.scene_id << " with " << config.views << " views -> "
        << (dir / "manifest.json").string() << '\n';
}

} // namespace prosplat::pipeline
