#pragma once

#include <stdexcept>
#include <string>

namespace eustar {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (bad row, bad JSON, wrong column count).
struct ParseError : Error {
    using Error::Error;
};

// Well-formed input that violates a domain invariant (negative price,
// off-budget allocation, belief off the simplex).
struct ValidationError : Error {
    using Error::Error;
};

// Bad arguments to an operation (m >= K, efficiency outside (0,1], ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Statistical calibration cannot produce a usable parameter.
struct CalibrationError : Error {
    using Error::Error;
};

// The LP solver failed to converge; message carries residual diagnostics.
struct SolverError : Error {
    using Error::Error;
};

}  // namespace eustar
