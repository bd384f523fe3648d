#include "epochspec/error.hpp"

namespace epochspec {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidSeries: return "InvalidSeries";
        case ErrorKind::InvalidLength: return "InvalidLength";
        case ErrorKind::BlockTooLong: return "BlockTooLong";
        case ErrorKind::InvalidMemoryParameter: return "InvalidMemoryParameter";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::FrequencyOutOfRange: return "FrequencyOutOfRange";
        case ErrorKind::RegimeError: return "RegimeError";
        case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::EigenFailure: return "EigenFailure";
        case ErrorKind::InversionFailure: return "InversionFailure";
        case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorKind::EmbeddingFailure: return "EmbeddingFailure";
        case ErrorKind::InvalidDgp: return "InvalidDgp";
        case ErrorKind::PlanError: return "PlanError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorClass classify(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidSeries:
        case ErrorKind::IoError:
            return ErrorClass::Input;
        case ErrorKind::QuadratureNonConvergence:
        case ErrorKind::NotPositiveDefinite:
        case ErrorKind::EigenFailure:
        case ErrorKind::InversionFailure:
        case ErrorKind::DegenerateDenominator:
        case ErrorKind::EmbeddingFailure:
            return ErrorClass::Numerical;
        default:
            return ErrorClass::Config;
    }
}

}  // namespace epochspec
