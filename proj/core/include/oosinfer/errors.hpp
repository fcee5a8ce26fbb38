#pragma once

#include <stdexcept>
#include <string>

namespace oosinfer {

/// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested in/out-of-sample partition cannot be formed.
class InvalidSplitError : public Error {
 public:
  using Error::Error;
};

/// Series too short for the requested feature construction.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (CSV); message carries the offending row.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Gram matrix numerically singular; use a penalized learner instead.
class SingularDesignError : public Error {
 public:
  using Error::Error;
};

/// Fitted coefficient vector is (numerically) zero, the self-normalized
/// statistic would divide by zero.
class DegenerateEstimatorError : public Error {
 public:
  using Error::Error;
};

/// Loss became non-finite during iterative training.
class TrainingDivergenceError : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration (unknown key, out-of-range value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oosinfer
