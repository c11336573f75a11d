// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prosplat {

enum class ErrorCode {
    InvalidCamera,
    NonRigidRotation,
    DegenerateBaseline,
    BehindCamera,
    InvalidPrimitive,
    EmptyInputSet,
    InvalidRange,
    ShapeMismatch,
    ImageTooSmall,
    EmptyBatch,
    MalformedLine,
    MissingFile,
    InvalidIndices,
    NoTargets,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every library failure is reported as an Error carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace prosplat
