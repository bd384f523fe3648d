#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epochspec {

enum class ErrorKind {
    InvalidSeries,
    InvalidLength,
    BlockTooLong,
    InvalidMemoryParameter,
    ConfigError,
    FrequencyOutOfRange,
    RegimeError,
    QuadratureNonConvergence,
    NotPositiveDefinite,
    EigenFailure,
    InversionFailure,
    DegenerateDenominator,
    EmbeddingFailure,
    InvalidDgp,
    PlanError,
    IoError,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Exit-code class used by the CLI: 2 input, 3 config, 4 numerical.
enum class ErrorClass { Input, Config, Numerical };

[[nodiscard]] ErrorClass classify(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace epochspec
