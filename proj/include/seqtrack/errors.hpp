#pragma once

#include <stdexcept>
#include <string>

namespace seqtrack {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument fell outside the domain where the quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model or configuration value violates its invariant. `key()` names the
/// offending field (e.g. "lambda").
class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Step control of the phi integrator could not meet the tolerance.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(double reached_x, const std::string& what)
      : Error(what), reached_x_(reached_x) {}
  double reached_x() const noexcept { return reached_x_; }

 private:
  double reached_x_;
};

/// A computed object failed one of its post-hoc invariant checks.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// -phi'(-x) - phi'(x) <= 0, which only happens for a broken phi table.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// h1 - h2 has no sign change on the search interval.
class NoRootBracket : public Error {
 public:
  using Error::Error;
};

/// Path arrays disagree with the simulation grid.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A cost evaluation needs a path that the bundle does not carry.
class MissingPath : public Error {
 public:
  using Error::Error;
};

}  // namespace seqtrack
