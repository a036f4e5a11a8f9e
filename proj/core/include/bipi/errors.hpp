#pragma once

#include <stdexcept>
#include <string>

namespace bipi {

/// Malformed or invalid boundary input.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulation left its valid regime (CLI exit code 2).
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written, or input file could not be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bipi
