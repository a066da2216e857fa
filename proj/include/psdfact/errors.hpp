#pragma once

#include <stdexcept>
#include <string>

namespace psdfact {

/// Malformed or inconsistent input data (non-finite entries, dimension mismatch, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Solver options that cannot be honored together.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Random initialization kept producing a degenerate scaling problem.
class InitializationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace psdfact
