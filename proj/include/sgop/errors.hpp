#pragma once

#include <stdexcept>
#include <string>

namespace sgop {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (e.g. |v| >= pi for exp).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Two points are (numerically) antipodal, so no unique minimal geodesic exists.
class AntipodalError : public Error {
 public:
  using Error::Error;
};

/// Tangent vectors or cones attached to different base points were combined.
class BaseMismatchError : public Error {
 public:
  using Error::Error;
};

/// A cone without interior, or whose polar has no interior.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// The candidate point violates the constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class EmptyFeasibleRegionError : public Error {
 public:
  using Error::Error;
};

/// Malformed instance document; `field()` names the offending entry.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message)
      : Error("instance field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace sgop
