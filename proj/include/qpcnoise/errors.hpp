#pragma once

#include <stdexcept>
#include <string>

namespace qpcnoise {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ModelParams invariant is violated (or a parameter file is malformed).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// V <= U + J: some C-operator square-root argument would be negative.
class HighBiasViolation : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

/// Config text could not be parsed. `key()` names the offending key (may be empty).
class ConfigParseError : public InvalidParameter {
 public:
  ConfigParseError(std::string key, const std::string& what)
      : InvalidParameter(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A function argument outside its domain (negative time, non-Hermitian H, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Base for failures of the numerical machinery itself.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian kernel is not one-dimensional.
class DegenerateSteadyState : public NumericalError {
 public:
  DegenerateSteadyState(double second_smallest, double smallest, double largest);
  double second_smallest() const noexcept { return second_smallest_; }
  double smallest() const noexcept { return smallest_; }
  double largest() const noexcept { return largest_; }

 private:
  double second_smallest_;
  double smallest_;
  double largest_;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Monte-Carlo trajectory bookkeeping went inconsistent.
class TrajectoryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Trajectory configuration is unusable (e.g. counts would overflow).
class TrajectoryConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

}  // namespace qpcnoise
