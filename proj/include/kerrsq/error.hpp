#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kerrsq {

enum class ErrorCode {
    InvalidParameter,
    ZeroGain,
    NonPositive,
    InvalidEfficiency,
    ZeroPower,
    SingularMatrix,
    UnstablePoint,
    PositiveLossEntry,
    InfeasibleMeasurement,
    NoDip,
    PoorFit,
    Degenerate,
    RankDeficient,
    MetadataMismatch,
    EmptyTrace,
    SchemaError,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to a message without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          message_(message) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    // Message without the code prefix.
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ZeroGain: return "ZeroGain";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::InvalidEfficiency: return "InvalidEfficiency";
    case ErrorCode::ZeroPower: return "ZeroPower";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::UnstablePoint: return "UnstablePoint";
    case ErrorCode::PositiveLossEntry: return "PositiveLossEntry";
    case ErrorCode::InfeasibleMeasurement: return "InfeasibleMeasurement";
    case ErrorCode::NoDip: return "NoDip";
    case ErrorCode::PoorFit: return "PoorFit";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::MetadataMismatch: return "MetadataMismatch";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace kerrsq
