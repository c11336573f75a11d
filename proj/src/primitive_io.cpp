// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/primitive_io.hpp"

#include "prosplat/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace prosplat {

using nlohmann::json;

std::vector<GaussianPrimitive> parse_primitives(const std::string &text) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) return {};
    std::vector<GaussianPrimitive> prims;
    try {
        const json doc = json::parse(text);
        for (const auto &entry : doc.at("primitives")) {
            GaussianPrimitive p;
            const auto mu = entry.at("mu").get<std::vector<double>>();
            const auto q = entry.at("q").get<std::vector<double>>();
            const auto s = entry.at("s").get<std::vector<double>>();
            if (mu.size() != 3 || q.size() != 4 || s.size() != 3) {
                throw Error(ErrorCode::InvalidPrimitive, "primitive " + std::to_string(prims.size()) + ": bad vector sizes");
            }
            p.mu = Vec3(mu[0], mu[1], mu[2]);
            p.q = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
            if (p.q.norm() > 0.0) p.q.normalize();
            p.s = Vec3(s[0], s[1], s[2]);
            p.sh = entry.at("sh").get<std::vector<double>>();
            p.alpha = entry.at("alpha").get<double>();
            validate(p);
            prims.push_back(std::move(p));
        }
    } catch (const json::exception &e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed primitive file: ") + e.what());
    }
    return prims;
}

std::string serialize_primitives(const std::vector<GaussianPrimitive> &prims) {
    json list = json::array();
    for (const auto &p : prims) {
        list.push_back({{"mu", {p.mu.x(), p.mu.y(), p.mu.z()}},
                        {"sh", p.sh},
                        {"q", {p.q.w(), p.q.x(), p.q.y(), p.q.z()}},
                        {"s", {p.s.x(), p.s.y(), p.s.z()}},
                        {"alpha", p.alpha}});
    }
    return json{{"primitives", list}}.dump(1) + "\n";
}

std::vector<GaussianPrimitive> load_primitives(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, "missing primitive file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_primitives(buf.str());
}

void save_primitives(const std::filesystem::path &path, const std::vector<GaussianPrimitive> &prims) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << serialize_primitives(prims);
}

} // namespace prosplat
