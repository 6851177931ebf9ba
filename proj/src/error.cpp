#include "gm2/error.hpp"

namespace gm2 {

std::string_view error_name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Degenerate: return "DegenerateError";
    case ErrorKind::InvalidPair: return "InvalidPair";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::EventMiss: return "EventMiss";
    case ErrorKind::DegenerateBody: return "DegenerateBody";
    case ErrorKind::ConvexityViolation: return "ConvexityViolation";
    case ErrorKind::OriginNotInterior: return "OriginNotInterior";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotEven: return "NotEven";
    case ErrorKind::L1TooLarge: return "L1TooLarge";
    case ErrorKind::ContinuationFailed: return "ContinuationFailed";
    case ErrorKind::ConvexityLost: return "ConvexityLost";
    case ErrorKind::BoundViolation: return "BoundViolation";
    case ErrorKind::BranchMismatch: return "BranchMismatch";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Io: return "IoError";
    }
    return "UnknownError";
}

int exit_code(ErrorKind kind) noexcept
{
    // 0 is success, 1 unexpected failure, 2 usage errors.
    return 10 + static_cast<int>(kind);
}

}  // namespace gm2
