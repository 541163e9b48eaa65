#pragma once

#include <stdexcept>
#include <string>

namespace cva {

/// Malformed or out-of-domain input value.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller violated a cross-object contract (grid mismatch, wrong measure).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear system could not be solved, even after regularization.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No intensity in the bootstrap bracket reproduces a quote.
class BootstrapError : public std::runtime_error {
 public:
  BootstrapError(double tenor, const std::string& what)
      : std::runtime_error(what), tenor_(tenor) {}

  double tenor() const noexcept { return tenor_; }

 private:
  double tenor_;
};

/// Regression design has no spread in the regressor.
class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside the calibration pipeline, tagged with the failing stage.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace cva
