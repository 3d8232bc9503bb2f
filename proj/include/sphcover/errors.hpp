#pragma once

#include <stdexcept>
#include <string>

namespace sphcover {

/// Base class of every domain error raised by the library. The CLI maps
/// these to exit status 1; anything else is a usage error or a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor or vector dimensions do not match.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Non-finite input or an iteration that failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A construction or problem would exceed its configured size cap.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Parameter outside the domain of a construction or theorem.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operation not supported for the given arguments.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Tensor expected to be symmetric is not.
class SymmetryError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (tensor, hitting-set or config files).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace sphcover
