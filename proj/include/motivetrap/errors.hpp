#pragma once

#include <stdexcept>
#include <string>

namespace motivetrap {

// Root of every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input failed a documented invariant (bad field, out-of-range value).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Duplicate key on registration.
class ConflictError : public Error {
public:
    using Error::Error;
};

// Event addressed to an environment or campaign that can no longer accept it.
class StaleEventError : public Error {
public:
    using Error::Error;
};

// Internal state no longer agrees with itself (e.g. a logged hash that the
// registry cannot resolve).
class StateError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

// Backend unreachable, rate limited or over quota. Safe to retry.
class RetryableGenerationError : public GenerationError {
public:
    using GenerationError::GenerationError;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Persisted file is unreadable, corrupt or carries an unknown version.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace motivetrap
