#pragma once

#include <stdexcept>
#include <string>

namespace naspred {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor / MLP shape mismatches.
struct ShapeError : Error {
    using Error::Error;
};

// Bad call arguments (empty sets, oversize requests, ...).
struct ArgumentError : Error {
    using Error::Error;
};

// Value outside its admissible range (epoch past schedule end, index overflow).
struct RangeError : Error {
    using Error::Error;
};

// Non-finite gradients or losses.
struct NumericError : Error {
    using Error::Error;
};

// Operation invoked on an object in the wrong state (unfitted normalizer,
// model without a device table).
struct StateError : Error {
    using Error::Error;
};

// Unknown device / arch id.
struct LookupError : Error {
    using Error::Error;
};

// Record is missing a metric the caller requires.
struct DataError : Error {
    using Error::Error;
};

// Malformed file content; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Duplicate ids or inconsistent dataset contents.
struct IntegrityError : Error {
    using Error::Error;
};

// Transfer requested for an encoding that cannot cross search spaces.
struct TransferError : Error {
    using Error::Error;
};

// Invalid experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Adversarial split left no usable training devices.
struct SplitError : Error {
    using Error::Error;
};

// Rank correlation undefined (length < 2 or zero rank variance).
struct CorrelationError : Error {
    using Error::Error;
};

} // namespace naspred
