#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace mapof {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Target inside the security zone, or otherwise unusable obstacle/target layout.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class DegenerateSectorError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Modes 2-4 need a partition map; asked for one with no obstacle active.
class MissingPartitionError : public Error {
 public:
  using Error::Error;
};

class TuningError : public Error {
 public:
  using Error::Error;
};

class RepeatedEigenvalueError : public TuningError {
 public:
  using TuningError::TuningError;
};

class InvalidBoundError : public TuningError {
 public:
  using TuningError::TuningError;
};

class RhoRangeError : public TuningError {
 public:
  using TuningError::TuningError;
};

/// Equilibrium probes require every obstacle farther than r_d from the target.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::optional<int> line = std::nullopt)
      : Error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line) {}

  /// 1-based line in the source file, when known.
  [[nodiscard]] std::optional<int> line() const { return line_; }

 private:
  std::optional<int> line_;
};

}  // namespace mapof
