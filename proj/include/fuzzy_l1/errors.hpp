#pragma once

#include <stdexcept>
#include <string>

namespace fuzzy_l1 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derivative evaluation produced NaN or Inf.
class IntegrationFault : public Error {
 public:
  IntegrationFault(double time, const std::string& what) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ControllabilityError : public Error {
 public:
  using Error::Error;
};

/// Raised when a matrix expected to be Hurwitz is not.
class StabilityError : public Error {
 public:
  using Error::Error;
};

class SingularFeedforwardError : public Error {
 public:
  using Error::Error;
};

class PropernessError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Plant state left the admissible region (infinity norm above the detector threshold).
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Invalid user-facing configuration. `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what) : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace fuzzy_l1
