#pragma once

#include <stdexcept>
#include <string>

namespace pep {

enum class ErrorCode {
    InvalidMeasure,
    EmptyMeasure,
    NonPositiveTime,
    TauOutOfRange,
    BadConstantK,
    BisectionFailure,
    EventHorizonExceeded,
    RootBracketFailure,
    NoClusterAt,
    IdentityViolation,
    StencilTooCloseToShock,
    QuadratureDivergence,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pep
