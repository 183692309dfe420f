#pragma once

#include <stdexcept>
#include <string>

namespace fairsample {

// Caller-side problems: bad flags, malformed schema/config files, violated
// argument contracts. The CLI reports these with exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : ValidationError {
    using ValidationError::ValidationError;
};

// Malformed or inconsistent data file contents (bad cell, cardinality, empty).
struct DataError : ValidationError {
    using ValidationError::ValidationError;
};

struct ConfigError : ValidationError {
    using ValidationError::ValidationError;
};

struct ArgumentError : ValidationError {
    using ValidationError::ValidationError;
};

// Problems that only surface while computing. The CLI reports these with
// exit code 2.
struct ComputeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A targeted cell lacks the members SMOTE interpolation needs.
struct InsufficientSupportError : ComputeError {
    using ComputeError::ComputeError;
};

// The requested base-rate target cannot be reached by adding samples.
struct UnreachableTargetError : ComputeError {
    using ComputeError::ComputeError;
};

struct TrainingError : ComputeError {
    using ComputeError::ComputeError;
};

struct InsufficientSampleError : ComputeError {
    using ComputeError::ComputeError;
};

struct DegenerateVarianceError : ComputeError {
    using ComputeError::ComputeError;
};

struct PairingError : ComputeError {
    using ComputeError::ComputeError;
};

}  // namespace fairsample
