#pragma once

#include <stdexcept>
#include <string>

namespace nlgrad {

enum class ErrorKind {
    UnsupportedDim,
    NormalizationFailure,
    OutOfRangeDelta,
    ZeroProfile,
    QuadratureFailure,
    GridMismatch,
    SingularSymbol,
    HorizonTooLarge,
    UnresolvedHorizon,
    ConfigParse,
    ExperimentFailure,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

} // namespace nlgrad
