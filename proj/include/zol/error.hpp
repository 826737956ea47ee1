#pragma once

#include <stdexcept>
#include <string>

namespace zol {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed file contents (bad magic, truncated payload, invalid label byte).
struct FormatError : Error {
  using Error::Error;
};

/// Files that are individually well-formed but mutually inconsistent.
struct ConsistencyError : Error {
  using Error::Error;
};

/// Feature values outside [0,1] or non-finite.
struct RangeError : Error {
  using Error::Error;
};

/// A requested class has no samples.
struct EmptyClassError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ArgumentError : Error {
  using Error::Error;
};

/// Optimization diverged (non-finite loss).
struct TrainingError : Error {
  using Error::Error;
};

}  // namespace zol
