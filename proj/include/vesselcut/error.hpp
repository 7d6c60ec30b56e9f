#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vesselcut {

enum class ErrorCode {
    NegativeCapacity,
    InvalidNode,
    TooLarge,
    OpenContour,
    EmptyMask,
    BandsOverlap,
    InvalidParameter,
    UnsupportedFormat,
    DimensionMismatch,
    NoBoundary,
    InvalidProfile,
    NoOverlap,
    ManifestError,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NegativeCapacity: return "NegativeCapacity";
    case ErrorCode::InvalidNode: return "InvalidNode";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OpenContour: return "OpenContour";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::BandsOverlap: return "BandsOverlap";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoBoundary: return "NoBoundary";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::ManifestError: return "ManifestError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code; the
/// message is prefixed with the code name so it survives a plain `what()`.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace vesselcut
