// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace prosplat {

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE *)>;

FilePtr open_file(const std::filesystem::path &path, const char *mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode), &std::fclose);
    if (!f) {
        throw Error(*mode == 'r' ? ErrorCode::MissingFile : ErrorCode::IoError, "cannot open " + path.string());
    }
    return f;
}

std::string lower_extension(const std::filesystem::path &path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

Image read_png(const std::filesystem::path &path) {
    FilePtr file = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::IoError, "libpng initialisation failed");
    }
    std::vector<png_bytep> rows;
    std::vector<unsigned char> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorCode::IoError, "cannot decode PNG " + path.string());
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_packing(png);
    png_set_strip_alpha(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    pixels.resize(static_cast<std::size_t>(width) * height * channels);
    rows.resize(height);
    for (int y = 0; y < height; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * channels;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(width, height, channels);
    for (std::size_t i = 0; i < pixels.size(); ++i) img.data[i] = pixels[i] / 255.0;
    return img;
}

void write_png(const std::filesystem::path &path, const Image &image) {
    if (image.channels != 1 && image.channels != 3) {
        throw Error(ErrorCode::InvalidArgument, "PNG output supports 1 or 3 channels");
    }
    std::vector<unsigned char> pixels(image.data.size());
    std::transform(image.data.begin(), image.data.end(), pixels.begin(), to_byte);

    FilePtr file = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "libpng initialisation failed");
    }
    std::vector<png_bytep> rows(image.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::IoError, "cannot encode PNG " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, image.width, image.height, 8, image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * image.width * image.channels;
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream &in) {
    std::string tok;
    char ch;
    while (in.get(ch)) {
        if (ch == '#') {
            std::string skip;
            std::getline(in, skip);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(ch);
    }
    return tok;
}

Image read_pnm(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
    const std::string magic = next_token(in);
    if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
        throw Error(ErrorCode::IoError, "unsupported PNM type in " + path.string());
    }
    const int channels = (magic == "P3" || magic == "P6") ? 3 : 1;
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception &) {
        throw Error(ErrorCode::IoError, "malformed PNM header in " + path.string());
    }
    if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
        throw Error(ErrorCode::IoError, "unsupported PNM dimensions or depth in " + path.string());
    }
    Image img(width, height, channels);
    if (magic == "P5" || magic == "P6") {
        std::vector<unsigned char> raw(img.data.size());
        in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
            throw Error(ErrorCode::IoError, "truncated PNM data in " + path.string());
        }
        for (std::size_t i = 0; i < raw.size(); ++i) img.data[i] = static_cast<double>(raw[i]) / maxval;
    } else {
        for (double &v : img.data) {
            const std::string tok = next_token(in);
            if (tok.empty()) throw Error(ErrorCode::IoError, "truncated PNM data in " + path.string());
            v = std::stod(tok) / maxval;
        }
    }
    return img;
}

void write_pnm(const std::filesystem::path &path, const Image &image) {
    if (image.channels != 1 && image.channels != 3) {
        throw Error(ErrorCode::InvalidArgument, "PNM output supports 1 or 3 channels");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << (image.channels == 3 ? "P3" : "P2") << '\n' << image.width << ' ' << image.height << "\n255\n";
    const int per_row = image.width * image.channels;
    for (int y = 0; y < image.height; ++y) {
        for (int i = 0; i < per_row; ++i) {
            out << static_cast<int>(to_byte(image.data[static_cast<std::size_t>(y) * per_row + i]))
                << (i + 1 == per_row ? '\n' : ' ');
        }
    }
}

} // namespace

unsigned char to_byte(double v) {
    if (!(v > 0.0)) return 0;
    if (v >= 1.0) return 255;
    return static_cast<unsigned char>(std::lround(v * 255.0));
}

Image read_image(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingFile, "missing image " + path.string());
    const std::string ext = lower_extension(path);
    if (ext == ".png") return read_png(path);
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return read_pnm(path);
    throw Error(ErrorCode::InvalidArgument, "unsupported image format " + path.string());
}

void write_image(const std::filesystem::path &path, const Image &image) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return write_png(path, image);
    if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return write_pnm(path, image);
    throw Error(ErrorCode::InvalidArgument, "unsupported image format " + path.string());
}

} // namespace prosplat
