#pragma once

#include <stdexcept>
#include <string>

namespace eitsim {

// Invalid numerical or structural input to a library operation.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (non-convergence, unresolvable grid, absent feature).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Requested transparency window does not exist in the spectrum.
class NoWindowError : public NumericError {
 public:
  explicit NoWindowError(const std::string& what) : NumericError(what) {}
};

// Filesystem failure while writing or reading artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eitsim
