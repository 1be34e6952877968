#include "dcstop/errors.hpp"

namespace dcstop {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonIncreasingTimes: return "NonIncreasingTimes";
        case ErrorCode::NonPositiveTime: return "NonPositiveTime";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
        case ErrorCode::WeightMismatch: return "WeightMismatch";
        case ErrorCode::StageOverflow: return "StageOverflow";
        case ErrorCode::StageMismatch: return "StageMismatch";
        case ErrorCode::NegativeTime: return "NegativeTime";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::CflViolation: return "CFLViolation";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::QOutOfRange: return "QOutOfRange";
        case ErrorCode::MissingPolicy: return "MissingPolicy";
        case ErrorCode::NonFinitePath: return "NonFinitePath";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace dcstop
