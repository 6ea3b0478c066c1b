#pragma once

#include <stdexcept>
#include <string>

namespace gridfreq {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A parameter set violates its documented constraints.
struct InvalidParameter : Error {
    using Error::Error;
};

// Requested equilibrium lies outside the model's limits.
struct InfeasibleInit : Error {
    using Error::Error;
};

// Non-finite input or state encountered during evaluation.
struct NumericError : Error {
    using Error::Error;
};

// Event-onset detection found no qualifying slope.
struct NoEventDetected : Error {
    using Error::Error;
};

// A metric is undefined for the given trace.
struct MetricsError : Error {
    using Error::Error;
};

struct SettlingNotReached : MetricsError {
    using MetricsError::MetricsError;
};

struct RocofUndefined : MetricsError {
    using MetricsError::MetricsError;
};

// Measurement file could not be turned into a usable trace.
struct IngestError : Error {
    using Error::Error;
};

// File read/write or format failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace gridfreq
