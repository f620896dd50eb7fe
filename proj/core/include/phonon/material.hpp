#pragma once

#include "phonon/phase_space.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace phonon {

/// coeff * omega^exponent
struct PowerLaw {
  double coeff = 1.0;
  double exponent = 0.0;
};

/// Tabulated (omega, value) rows, strictly increasing in omega. Evaluated
/// piecewise-constantly: the row with the largest omega <= query wins, the
/// first row extends to the left.
struct TabulatedLaw {
  std::vector<std::pair<double, double>> rows;
};

class FrequencyLaw {
 public:
  FrequencyLaw(PowerLaw p) : law_(p) {}  // NOLINT(google-explicit-constructor)
  FrequencyLaw(TabulatedLaw t);          // NOLINT(google-explicit-constructor)

  double operator()(double omega) const;
  /// d/domega. Tables use the secant through the bracketing rows.
  double derivative(double omega) const;
  std::string describe() const;

  const std::variant<PowerLaw, TabulatedLaw>& law() const noexcept { return law_; }

 private:
  std::variant<PowerLaw, TabulatedLaw> law_;
};

/// Optional validation bounds; absent bounds fall back to strict positivity.
struct MaterialBounds {
  std::optional<double> tau_min;
  std::optional<double> nu_min;
  std::optional<double> nu_max;
};

/// Material values sampled on a grid's frequency nodes.
struct NodalMaterial {
  std::vector<double> nu;
  std::vector<double> tau;
  std::vector<double> c_omega;
  double nu_max = 0.0;
  double tau_min = 0.0;
};

/// Frequency-dependent group velocity nu(omega), relaxation time tau(omega) and
/// linearization weight C_omega(omega) of one material, all dimensionless.
/// Immutable after construction.
class MaterialModel {
 public:
  MaterialModel(FrequencyLaw nu, FrequencyLaw tau, FrequencyLaw c_omega,
                MaterialBounds bounds = {});

  /// nu = omega, tau = 1/omega, C_omega = 1.
  static MaterialModel power_law_reference();

  double nu(double omega) const { return nu_(omega); }
  double tau(double omega) const { return tau_(omega); }
  double c_omega(double omega) const { return c_(omega); }
  double nu_derivative(double omega) const { return nu_.derivative(omega); }

  /// Enforces tau >= tau_min > 0, 0 < nu_min <= nu <= nu_max and C_omega > 0
  /// on every node; throws ConfigError naming the offending node.
  void validate(std::span<const double> omega_nodes) const;

  NodalMaterial sample(std::span<const double> omega_nodes) const;

  double nu_max_on(std::span<const double> omega_nodes) const;

  /// Same material with nu and tau multiplied by constant factors (substrate).
  MaterialModel scaled(double nu_factor, double tau_factor) const;

  const MaterialBounds& bounds() const noexcept { return bounds_; }
  std::string describe() const;

 private:
  FrequencyLaw nu_, tau_, c_;
  MaterialBounds bounds_;
  double nu_factor_ = 1.0;
  double tau_factor_ = 1.0;
};

/// C_tau = sum_mu sum_omega w_mu w_omega C_omega / tau, the same quadrature the
/// collision operator uses. Throws ConfigError if the result is not positive.
double compute_c_tau(const NodalMaterial& material, const PhaseSpaceGrid& grid);

struct InterfaceCoefficients {
  double eta_t = 1.0;
  double zeta_t = 0.0;
  double eta_s = 1.0;
  double zeta_s = 0.0;
  double c = 1.0;
};

/// Expresses the transmission/reflection coefficients in terms of eta_t using
/// the zero-net-flux coupling and the detailed-balance condition eta_t + c zeta_t = 1:
///   zeta_t = (1 - eta_t)/c,  zeta_s = (nu_t/nu_s)(1 - eta_t),
///   eta_s  = 1 - (nu_t/nu_s)(1 - eta_t)/c.
/// Throws InterfaceError naming the first coefficient outside [0, 1].
InterfaceCoefficients reduce_interface_coefficients(double eta_t, double nu_t, double nu_s,
                                                    double c = 1.0);

/// Temperature deviation  <f / tau> / C_tau  of one (mu, omega) slice in channel order.
double temperature_deviation(std::span<const double> slice, const NodalMaterial& material,
                             const PhaseSpaceGrid& grid, double c_tau);

}  // namespace phonon
