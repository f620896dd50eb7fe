#pragma once

#include <stdexcept>
#include <string>

namespace phonon {

/// Invalid or inconsistent run configuration (bad schema, material bounds,
/// source placement). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while time-marching: CFL violation, non-finite values.
/// Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derived interface coefficient left [0, 1].
class InterfaceError : public std::domain_error {
 public:
  InterfaceError(std::string coefficient, double value, const std::string& what)
      : std::domain_error(what), coefficient_(std::move(coefficient)), value_(value) {}

  const std::string& coefficient() const noexcept { return coefficient_; }
  double value() const noexcept { return value_; }

 private:
  std::string coefficient_;
  double value_;
};

}  // namespace phonon
