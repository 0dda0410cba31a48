#pragma once

#include <stdexcept>
#include <string>

namespace rangewalk {

/// Malformed input: asymmetric or unnormalized pmf, bad trajectory, bad flag value.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation is defined only in a particular lattice dimension.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A cell, path or replica budget would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant failed at runtime. Never expected to fire on valid input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace rangewalk
