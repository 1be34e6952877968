#pragma once

#include <stdexcept>
#include <string>

namespace dcstop {

enum class ErrorCode {
    NonIncreasingTimes,
    NonPositiveTime,
    NonPositiveWeight,
    WeightSumMismatch,
    WeightMismatch,
    StageOverflow,
    StageMismatch,
    NegativeTime,
    DomainError,
    CflViolation,
    UnsupportedDimension,
    QOutOfRange,
    MissingPolicy,
    NonFinitePath,
    InsufficientSamples,
    ConfigError,
    IoError,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a typed error code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dcstop
