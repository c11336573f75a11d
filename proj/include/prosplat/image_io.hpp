// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/image.hpp"

#include <filesystem>

namespace prosplat {

/// Reads 8-bit PNG (gray, gray+alpha, RGB, RGBA; 16-bit is reduced to 8) or
/// PPM/PGM (P2, P3, P5, P6) into [0, 1] values. Alpha is dropped.
Image read_image(const std::filesystem::path &path);

/// Writes by extension: .png (8-bit gray or RGB) or .ppm/.pgm (ASCII P3/P2).
/// Values are clamped to [0, 1] and rounded to 8 bits.
void write_image(const std::filesystem::path &path, const Image &image);

/// Byte-exact quantisation used by the writers.
unsigned char to_byte(double v);

} // namespace prosplat
