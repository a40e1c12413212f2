#pragma once

#include <stdexcept>
#include <string>

namespace defog {

// Error taxonomy for the whole library. The C API maps each type to a
// defog_status code; everything derives from Error so callers can catch
// the whole family at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ParamError : Error {
  using Error::Error;
};

// Thrown when an explicit PDE step produces a non-finite value.
struct DivergenceError : Error {
  int iteration;
  DivergenceError(int iter, const std::string& msg) : Error(msg), iteration(iter) {}
};

struct PlanError : Error {
  using Error::Error;
};

}  // namespace defog
