#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gm2 {

/// Every failure the library can report. The CLI maps each kind to its own
/// exit code (see exit_code()).
enum class ErrorKind {
    Domain,
    Degenerate,
    InvalidPair,
    QuadratureFailure,
    StepUnderflow,
    EventMiss,
    DegenerateBody,
    ConvexityViolation,
    OriginNotInterior,
    NotPositive,
    NotEven,
    L1TooLarge,
    ContinuationFailed,
    ConvexityLost,
    BoundViolation,
    BranchMismatch,
    Parse,
    Io,
};

[[nodiscard]] std::string_view error_name(ErrorKind kind) noexcept;

/// Process exit status for a failure of the given kind. Always nonzero and
/// distinct per kind.
[[nodiscard]] int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

/// Homotopy step underflow; carries the last accepted homotopy parameter.
class ContinuationFailed : public Error {
public:
    ContinuationFailed(double t_reached, const std::string& what)
        : Error(ErrorKind::ContinuationFailed, what), t_reached_(t_reached) {}

    [[nodiscard]] double t_reached() const noexcept { return t_reached_; }

private:
    double t_reached_;
};

}  // namespace gm2
