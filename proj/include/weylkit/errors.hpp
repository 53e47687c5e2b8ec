#pragma once

#include <stdexcept>
#include <string>

namespace weylkit {

enum class ErrorKind {
    DimensionMismatch,
    NotHermitian,
    Singular,
    SingularG,
    PoleProximity,
    ResolventPole,
    ZeroLambda,
    MultivaluedBoundary,
    DomainViolation,
    NoCommonGap,
    GapViolation,
    SchemeMismatch,
    LengthMismatch,
    EigenvalueHit,
    NonSelfadjointTheta,
    InputError,
    ValidationFailure,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception carrying a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace weylkit
