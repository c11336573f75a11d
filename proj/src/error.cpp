// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/error.hpp"

namespace prosplat {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidCamera: return "InvalidCamera";
    case ErrorCode::NonRigidRotation: return "NonRigidRotation";
    case ErrorCode::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::InvalidPrimitive: return "InvalidPrimitive";
    case ErrorCode::EmptyInputSet: return "EmptyInputSet";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::InvalidIndices: return "InvalidIndices";
    case ErrorCode::NoTargets: return "NoTargets";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace prosplat
