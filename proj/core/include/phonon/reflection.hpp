#pragma once

#include "phonon/material.hpp"

#include <span>
#include <string>
#include <vector>

namespace phonon {

/// 0.25*tanh(10(omega - a)) - 0.25*tanh(2(omega - b)) + 0.5, clamped to [0, 1].
double eta_tanh(double omega, double a, double b);

/// Reflection coefficient eta(omega) at the transducer/substrate interface.
/// Every evaluation is clamped to [0, 1].
class ReflectionModel {
 public:
  enum class Kind { tanh_param, table, constant };

  static ReflectionModel tanh_param(double a, double b);
  static ReflectionModel table(TabulatedLaw rows);
  static ReflectionModel constant(double value);

  double operator()(double omega) const;
  std::vector<double> sample(std::span<const double> omega_nodes) const;

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::string describe() const;

 private:
  ReflectionModel(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<std::pair<double, double>> rows_;
};

}  // namespace phonon
