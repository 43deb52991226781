#pragma once

#include <stdexcept>
#include <string>

namespace nnv {

// Input/configuration problems. CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : InputError {
    using InputError::InputError;
};

struct InvalidWorkspace : InputError {
    using InputError::InputError;
};

struct DimensionMismatch : InputError {
    using InputError::InputError;
};

struct NonDivisibleBounds : InputError {
    using InputError::InputError;
};

// Internal consistency failures: these signal a bug in an upstream stage, not
// bad user input.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoHit : InternalError {
    using InternalError::InternalError;
};

struct DegenerateInput : InternalError {
    using InternalError::InternalError;
};

struct NotImagingAdapted : InternalError {
    using InternalError::InternalError;
};

struct ParallelDegenerate : InternalError {
    using InternalError::InternalError;
};

struct NotInfeasible : InternalError {
    using InternalError::InternalError;
};

struct OutOfRegion : InternalError {
    using InternalError::InternalError;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nnv
