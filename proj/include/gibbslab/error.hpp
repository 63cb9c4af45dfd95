#pragma once

#include <stdexcept>
#include <string>

namespace gibbslab {

enum class ErrorKind {
    // validation
    RowColumnEmpty,
    NotPrimitive,
    InvalidArgument,
    TooShort,
    NonPositive,
    OutOfRange,
    NotLattice,
    SizeGuard,
    Schema,
    // numerical
    NoPath,
    NoConvergence,
    SolveFailure,
    Undefined,
    DegenerateVariance,
    ZeroProbability,
};

const char* to_string(ErrorKind kind);

/// True for kinds that come from numerical failure rather than bad input.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gibbslab
