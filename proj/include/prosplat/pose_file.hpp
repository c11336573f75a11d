// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prosplat/camera.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace prosplat {

/// One camera line of a RealEstate10K-style pose file:
///   timestamp fx fy cx cy k0 k1 r00 r01 r02 t0 r10 r11 r12 t1 r20 r21 r22 t2
/// Intrinsics are normalised by the image size; the 3x4 block is the
/// row-major world-to-camera matrix [R | T].
struct PoseRecord {
    double timestamp = 0.0;
    /// fx, fy, cx, cy as stored (normalised).
    std::array<double, 4> normalized{};
    /// The two fields between the intrinsics and the matrix, kept verbatim.
    std::array<double, 2> reserved{};
    /// The matrix exactly as stored.
    Mat34 extrinsic = Mat34::Zero();

    CameraIntrinsics intrinsics; ///< rescaled to pixels
    CameraExtrinsics extrinsics; ///< validated (snapped onto SO(3) when close)
};

struct PoseFile {
    /// First line when it is not a camera line (RealEstate10K stores the video URL).
    std::string header;
    int image_width = 0;
    int image_height = 0;
    std::vector<PoseRecord> records;
};

struct PoseParseOptions {
    /// Stored rotations within this distance of SO(3) are re-orthonormalised;
    /// anything further away is rejected as NonRigidRotation.
    double rotation_tolerance = 1e-5;
};

/// Throws MalformedLine (with the 1-based line number) for lines that do not
/// hold exactly 19 numbers, NonRigidRotation, or InvalidCamera.
PoseFile parse_pose_file(std::istream &in, int image_width, int image_height, const PoseParseOptions &opts = {});

/// Writes records with shortest round-trip number formatting, so parsing the
/// output reproduces every stored field bit for bit.
void write_pose_file(std::ostream &out, const PoseFile &file);

PoseRecord make_pose_record(double timestamp, const std::array<double, 4> &normalized, const Mat34 &extrinsic,
                            int image_width, int image_height, const PoseParseOptions &opts = {});

} // namespace prosplat
