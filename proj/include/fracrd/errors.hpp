#pragma once

#include <stdexcept>
#include <string>

namespace fracrd {

// Bad argument value (non-finite input, out-of-range parameter, wrong shape).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An iterative evaluation stopped without reaching its tolerance.
class PrecisionError : public std::runtime_error {
public:
  PrecisionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

// Requested modes cannot be represented on the quadrature grid.
class ResolutionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on an object in the wrong state (e.g. unvalidated kernel).
class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class StepSizeError : public std::runtime_error {
public:
  StepSizeError(const std::string& what, double suggested_dt)
      : std::runtime_error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

private:
  double suggested_dt_;
};

// Scalar implicit solve did not converge.
class StiffnessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

} // namespace fracrd
