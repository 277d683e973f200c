#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace windline {

/// Machine-readable failure codes. Every library error carries one.
enum class ErrorCode {
    InvalidInput,
    NonImmersion,
    TooManyHits,
    MissingSecondDerivative,
    InsufficientSamples,
    SingularityOnPath,
    NoConvergence,
    OverlappingExclusions,
    WindowEscape,
    PointOnCurve,
    OracleMismatch,
    NotC11NearHit,
    DetourOverlap,
    AnnulusViolation,
    IrrationalAngle,
    SyntaxError,
    UnknownFunction,
    NonHolomorphic,
    NonDifferentiable,
};

/// Coarse grouping used by the CLI to pick an exit status.
enum class ErrorCategory { Parse, Numeric };

std::string_view to_string(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failures carry the byte offset into the source text.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, const std::string& message, std::size_t position)
        : Error(code, message + " at position " + std::to_string(position)), detail_(message), position_(position) {}

    std::size_t position() const noexcept { return position_; }
    /// Message without the position suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t position_;
};

}  // namespace windline
