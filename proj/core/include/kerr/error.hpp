#pragma once

#include <stdexcept>
#include <string>

namespace kerr {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The input series carries no information (constant, empty).
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

/// Too few samples, visits or neighbour pairs for the requested statistic.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Norm or invariant drift beyond tolerance during propagation.
class DriftError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; the message carries the line number when known.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated series file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace kerr
