#pragma once

#include <stdexcept>
#include <string>

namespace fsi {

// Error categories used across the solver. All carry a human-readable message;
// the CLI maps them to nonzero exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : Error {
  using Error::Error;
};

struct MeshError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct StepError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace fsi
