// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/weights_io.hpp"

#include "prosplat/error.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace prosplat {

namespace {

using nlohmann::json;

struct NamedTensor {
    std::string name;
    std::vector<int> shape;
    Eigen::MatrixXd *matrix;
};

std::vector<NamedTensor> tensors_of(ProjectionWeights &w) {
    auto shape2 = [](const Eigen::MatrixXd &m) { return std::vector<int>{int(m.rows()), int(m.cols())}; };
    auto kernel = [](const Eigen::MatrixXd &m) { return std::vector<int>{int(m.rows()), 3, 3}; };
    return {{"wq", shape2(w.wq), &w.wq},
            {"wk", shape2(w.wk), &w.wk},
            {"wv", shape2(w.wv), &w.wv},
            {"dsc2x.depthwise", kernel(w.stage2x.depthwise), &w.stage2x.depthwise},
            {"dsc2x.pointwise", shape2(w.stage2x.pointwise), &w.stage2x.pointwise},
            {"dsc4x.depthwise", kernel(w.stage4x.depthwise), &w.stage4x.depthwise},
            {"dsc4x.pointwise", shape2(w.stage4x.pointwise), &w.stage4x.pointwise}};
}

void put_u32_le(std::string &out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint32_t get_u32_le(const unsigned char *p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

[[noreturn]] void malformed(const std::string &why) { throw Error(ErrorCode::IoError, "malformed weight bundle: " + why); }

} // namespace

std::string serialize_weights(const ProjectionWeights &weights) {
    ProjectionWeights copy = weights;
    json header = json::object();
    std::string payload;
    for (const auto &t : tensors_of(copy)) {
        const std::size_t begin = payload.size();
        // Row-major element order.
        for (Eigen::Index r = 0; r < t.matrix->rows(); ++r) {
            for (Eigen::Index c = 0; c < t.matrix->cols(); ++c) {
                put_u32_le(payload, std::bit_cast<std::uint32_t>(static_cast<float>((*t.matrix)(r, c))));
            }
        }
        header[t.name] = {{"dtype", "F32"}, {"shape", t.shape}, {"data_offsets", {begin, payload.size()}}};
    }
    header["__metadata__"] = {{"format", "prosplat-projection-weights"}, {"version", "1"}};
    const std::string text = header.dump();
    std::string out;
    const std::uint64_t n = text.size();
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((n >> (8 * b)) & 0xFF));
    out += text;
    out += payload;
    return out;
}

ProjectionWeights deserialize_weights(const std::string &bytes) {
    if (bytes.size() < 8) malformed("truncated header length");
    const auto *raw = reinterpret_cast<const unsigned char *>(bytes.data());
    std::uint64_t n = 0;
    for (int b = 0; b < 8; ++b) n |= std::uint64_t(raw[b]) << (8 * b);
    if (n > bytes.size() - 8) malformed("header length exceeds file size");

    json header;
    try {
        header = json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(n));
    } catch (const json::exception &e) {
        malformed(e.what());
    }
    const std::size_t data_start = 8 + n;
    const std::size_t data_size = bytes.size() - data_start;

    ProjectionWeights w;
    for (auto &t : tensors_of(w)) {
        if (!header.contains(t.name)) malformed("missing tensor " + t.name);
        const json &entry = header.at(t.name);
        if (entry.value("dtype", "") != "F32") malformed(t.name + " is not F32");
        const auto shape = entry.at("shape").get<std::vector<int>>();
        const auto offsets = entry.at("data_offsets").get<std::vector<std::size_t>>();
        if (shape.size() < 2 || offsets.size() != 2 || offsets[0] > offsets[1] || offsets[1] > data_size) {
            malformed("bad shape or offsets for " + t.name);
        }
        std::size_t count = 1;
        for (int d : shape) {
            if (d < 1) malformed("non-positive dimension in " + t.name);
            count *= static_cast<std::size_t>(d);
        }
        if (offsets[1] - offsets[0] != 4 * count) malformed("payload size mismatch for " + t.name);
        const Eigen::Index rows = shape[0];
        const Eigen::Index cols = static_cast<Eigen::Index>(count / shape[0]);
        *t.matrix = Eigen::MatrixXd(rows, cols);
        const unsigned char *p = raw + data_start + offsets[0];
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c, p += 4) {
                (*t.matrix)(r, c) = static_cast<double>(std::bit_cast<float>(get_u32_le(p)));
            }
        }
    }
    validate(w, w.channels());
    return w;
}

void save_weights(const std::filesystem::path &path, const ProjectionWeights &w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    const std::string bytes = serialize_weights(w);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ProjectionWeights load_weights(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_weights(buf.str());
}

} // namespace prosplat
