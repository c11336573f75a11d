// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/pose_file.hpp"

#include "prosplat/error.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace prosplat {

namespace {

constexpr int kFieldCount = 19;

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_double(std::string_view tok, double &value) {
    const char *end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

[[noreturn]] void malformed(int line_no, const std::string &why) {
    throw Error(ErrorCode::MalformedLine, "line " + std::to_string(line_no) + ": " + why);
}

} // namespace

PoseRecord make_pose_record(double timestamp, const std::array<double, 4> &normalized, const Mat34 &extrinsic,
                            int image_width, int image_height, const PoseParseOptions &opts) {
    return PoseRecord{timestamp,
                      normalized,
                      {0.0, 0.0},
                      extrinsic,
                      CameraIntrinsics(normalized[0] * image_width, normalized[1] * image_height,
                                       normalized[2] * image_width, normalized[3] * image_height, image_width,
                                       image_height),
                      CameraExtrinsics::from_matrix(extrinsic, opts.rotation_tolerance)};
}

PoseFile parse_pose_file(std::istream &in, int image_width, int image_height, const PoseParseOptions &opts) {
    PoseFile file;
    file.image_width = image_width;
    file.image_height = image_height;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;

        double values[kFieldCount];
        if (line_no == 1 && !parse_double(tokens.front(), values[0])) {
            file.header = line;
            continue;
        }
        if (tokens.size() != kFieldCount) {
            malformed(line_no, "expected " + std::to_string(kFieldCount) + " fields, found " +
                                   std::to_string(tokens.size()));
        }
        for (int i = 0; i < kFieldCount; ++i) {
            if (!parse_double(tokens[i], values[i])) malformed(line_no, "field " + std::to_string(i + 1) + " is not a number");
        }
        Mat34 rt;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) rt(r, c) = values[7 + 4 * r + c];
        }
        try {
            PoseRecord rec = make_pose_record(values[0], {values[1], values[2], values[3], values[4]}, rt, image_width,
                                              image_height, opts);
            rec.reserved = {values[5], values[6]};
            file.records.push_back(std::move(rec));
        } catch (const Error &e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return file;
}

void write_pose_file(std::ostream &out, const PoseFile &file) {
    if (!file.header.empty()) out << file.header << '\n';
    for (const auto &rec : file.records) {
        out << format_double(rec.timestamp);
        for (double v : rec.normalized) out << ' ' << format_double(v);
        for (double v : rec.reserved) out << ' ' << format_double(v);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) out << ' ' << format_double(rec.extrinsic(r, c));
        }
        out << '\n';
    }
}

} // namespace prosplat
