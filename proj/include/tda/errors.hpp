#pragma once

#include <stdexcept>
#include <string>

namespace tda {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (files, point clouds, labels).
struct InputError : Error {
    using Error::Error;
};

/// Invalid parameter combination (e.g. homology dimension too large for the filtration).
struct ConfigError : Error {
    using Error::Error;
};

/// Value outside the mathematical domain of an operation (e.g. infinite death
/// where a bounded diagram is required).
struct DomainError : Error {
    using Error::Error;
};

/// Request exceeds a hard size bound of an exhaustive routine.
struct SizeLimitError : Error {
    using Error::Error;
};

/// Numerical failure (eigendecomposition, singular system).
struct NumericError : Error {
    using Error::Error;
};

/// A prediction could not be formed (e.g. zero kernel mass).
struct PredictionError : Error {
    using Error::Error;
};

/// Model selection could not pick any candidate.
struct SelectionError : Error {
    using Error::Error;
};

/// Model fitting failed (singular design, degenerate data).
struct FitError : Error {
    using Error::Error;
};

/// A multi-stage run aborted; the message names the failed stage.
struct PipelineError : Error {
    using Error::Error;
};

} // namespace tda
