#pragma once

#include <stdexcept>
#include <string>

namespace quapi {

// Failure classes map to CLI exit codes:
//   parse = 2, validation = 3, numerical = 4, capacity = 5, not-crossed = 6.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

// Adaptive quadrature ran out of panel budget; carries the remaining
// error estimate.
struct QuadratureError : NumericalError {
    double residual;
    QuadratureError(const std::string& msg, double res)
        : NumericalError(msg), residual(res) {}
};

// Two independent computation routes disagree beyond tolerance.
struct ConsistencyError : NumericalError {
    using NumericalError::NumericalError;
};

// A density-matrix invariant was violated during propagation.
struct IntegrityError : NumericalError {
    using NumericalError::NumericalError;
};

struct CapacityError : Error {
    using Error::Error;
};

// Trajectory never reached the decoherence threshold; carries the final
// |rho01(t)| / |rho01(0)| ratio so the caller can decide to extend the run.
struct NotCrossedError : Error {
    double final_ratio;
    NotCrossedError(const std::string& msg, double ratio)
        : Error(msg), final_ratio(ratio) {}
};

}  // namespace quapi
