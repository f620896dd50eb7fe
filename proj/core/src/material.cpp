#include "phonon/material.hpp"

#include "phonon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phonon {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

FrequencyLaw::FrequencyLaw(TabulatedLaw t) : law_(std::move(t)) {
  const auto& rows = std::get<TabulatedLaw>(law_).rows;
  if (rows.empty()) throw ConfigError("material table is empty");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].first > rows[i - 1].first))
      throw ConfigError("material table omega column must be strictly increasing (row " +
                        std::to_string(i + 1) + ")");
}

double FrequencyLaw::operator()(double omega) const {
  if (const auto* p = std::get_if<PowerLaw>(&law_)) {
    return p->coeff * std::pow(omega, p->exponent);
  }
  const auto& rows = std::get<TabulatedLaw>(law_).rows;
  auto it = std::upper_bound(rows.begin(), rows.end(), omega,
                             [](double w, const auto& r) { return w < r.first; });
  if (it == rows.begin()) return rows.front().second;
  return std::prev(it)->second;
}

double FrequencyLaw::derivative(double omega) const {
  if (const auto* p = std::get_if<PowerLaw>(&law_)) {
    if (p->exponent == 0.0) return 0.0;
    return p->coeff * p->exponent * std::pow(omega, p->exponent - 1.0);
  }
  const auto& rows = std::get<TabulatedLaw>(law_).rows;
  if (rows.size() < 2) return 0.0;
  auto it = std::upper_bound(rows.begin(), rows.end(), omega,
                             [](double w, const auto& r) { return w < r.first; });
  if (it == rows.begin()) ++it;
  if (it == rows.end()) --it;
  const auto& hi = *it;
  const auto& lo = *std::prev(it);
  return (hi.second - lo.second) / (hi.first - lo.first);
}

std::string FrequencyLaw::describe() const {
  if (const auto* p = std::get_if<PowerLaw>(&law_))
    return "power_law(" + num(p->coeff) + "*omega^" + num(p->exponent) + ")";
  return "table(" + std::to_string(std::get<TabulatedLaw>(law_).rows.size()) + " rows)";
}

MaterialModel::MaterialModel(FrequencyLaw nu, FrequencyLaw tau, FrequencyLaw c_omega,
                             MaterialBounds bounds)
    : nu_(std::move(nu)), tau_(std::move(tau)), c_(std::move(c_omega)), bounds_(bounds) {
  if (bounds_.tau_min && !(*bounds_.tau_min > 0.0))
    throw ConfigError("material.tau_min must be > 0 (relaxation time bounded below)");
  if (bounds_.nu_min && !(*bounds_.nu_min > 0.0))
    throw ConfigError("material.nu_min must be > 0 (group velocity bounded)");
  if (bounds_.nu_min && bounds_.nu_max && *bounds_.nu_max < *bounds_.nu_min)
    throw ConfigError("material.nu_max must be >= material.nu_min");
}

MaterialModel MaterialModel::power_law_reference() {
  return MaterialModel(PowerLaw{1.0, 1.0}, PowerLaw{1.0, -1.0}, PowerLaw{1.0, 0.0});
}

void MaterialModel::validate(std::span<const double> omega_nodes) const {
  for (double w : omega_nodes) {
    const double t = tau(w);
    const double v = nu(w);
    const double c = c_omega(w);
    const double t_floor = bounds_.tau_min.value_or(0.0);
    if (!std::isfinite(t) || t <= 0.0 || t < t_floor)
      throw ConfigError("material: relaxation time must satisfy tau >= tau_min > 0 "
                        "(bounded below); tau(omega=" + num(w) + ") = " + num(t) +
                        (bounds_.tau_min ? ", tau_min = " + num(*bounds_.tau_min) : ""));
    if (!std::isfinite(v) || v <= 0.0 || (bounds_.nu_min && v < *bounds_.nu_min) ||
        (bounds_.nu_max && v > *bounds_.nu_max))
      throw ConfigError("material: group velocity must satisfy 0 < nu_min <= nu <= nu_max "
                        "< inf; nu(omega=" + num(w) + ") = " + num(v));
    if (!std::isfinite(c) || c <= 0.0)
      throw ConfigError("material: C_omega must be positive; C_omega(omega=" + num(w) +
                        ") = " + num(c));
  }
}

NodalMaterial MaterialModel::sample(std::span<const double> omega_nodes) const {
  validate(omega_nodes);
  NodalMaterial m;
  m.nu.reserve(omega_nodes.size());
  m.tau.reserve(omega_nodes.size());
  m.c_omega.reserve(omega_nodes.size());
  for (double w : omega_nodes) {
    m.nu.push_back(nu(w));
    m.tau.push_back(tau(w));
    m.c_omega.push_back(c_omega(w));
  }
  m.nu_max = *std::max_element(m.nu.begin(), m.nu.end());
  m.tau_min = *std::min_element(m.tau.begin(), m.tau.end());
  return m;
}

double MaterialModel::nu_max_on(std::span<const double> omega_nodes) const {
  double m = 0.0;
  for (double w : omega_nodes) m = std::max(m, nu(w));
  return m;
}

MaterialModel MaterialModel::scaled(double nu_factor, double tau_factor) const {
  if (!(nu_factor > 0.0) || !(tau_factor > 0.0))
    throw ConfigError("material scaling factors must be positive");
  auto scale = [](const FrequencyLaw& law, double f) -> FrequencyLaw {
    if (const auto* p = std::get_if<PowerLaw>(&law.law())) return PowerLaw{p->coeff * f, p->exponent};
    TabulatedLaw t = std::get<TabulatedLaw>(law.law());
    for (auto& r : t.rows) r.second *= f;
    return t;
  };
  MaterialBounds b = bounds_;
  if (b.tau_min) *b.tau_min *= tau_factor;
  if (b.nu_min) *b.nu_min *= nu_factor;
  if (b.nu_max) *b.nu_max *= nu_factor;
  MaterialModel out(scale(nu_, nu_factor), scale(tau_, tau_factor), c_, b);
  out.nu_factor_ = nu_factor_ * nu_factor;
  out.tau_factor_ = tau_factor_ * tau_factor;
  return out;
}

std::string MaterialModel::describe() const {
  return "nu=" + nu_.describe() + ";tau=" + tau_.describe() + ";c_omega=" + c_.describe();
}

double compute_c_tau(const NodalMaterial& material, const PhaseSpaceGrid& grid) {
  double mu_total = 0.0;
  for (double w : grid.mu_weights()) mu_total += w;
  double s = 0.0;
  const auto wo = grid.omega_weights();
  for (int k = 0; k < grid.n_omega(); ++k) s += wo[k] * material.c_omega[k] / material.tau[k];
  const double c_tau = mu_total * s;
  if (!(c_tau > 0.0) || !std::isfinite(c_tau))
    throw ConfigError("material: C_tau = <C_omega/tau> must be positive, got " + num(c_tau));
  return c_tau;
}

InterfaceCoefficients reduce_interface_coefficients(double eta_t, double nu_t, double nu_s,
                                                    double c) {
  if (!(c > 0.0)) throw InterfaceError("c", c, "interface: detailed-balance constant c must be > 0");
  if (!(nu_t > 0.0) || !(nu_s > 0.0))
    throw InterfaceError("nu", nu_t > 0.0 ? nu_s : nu_t, "interface: group velocities must be > 0");
  auto check = [](const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v))
      throw InterfaceError(name, v,
                           std::string("interface: coefficient ") + name + " = " + num(v) +
                               " lies outside [0, 1]; (eta_t, c, nu_t/nu_s) is physically inconsistent");
  };
  check("eta_t", eta_t);
  const double ratio = nu_t / nu_s;
  InterfaceCoefficients out;
  out.c = c;
  out.eta_t = eta_t;
  out.zeta_t = (1.0 - eta_t) / c;
  out.zeta_s = ratio * (1.0 - eta_t);
  out.eta_s = 1.0 - ratio * (1.0 - eta_t) / c;
  check("zeta_t", out.zeta_t);
  check("eta_s", out.eta_s);
  check("zeta_s", out.zeta_s);
  return out;
}

double temperature_deviation(std::span<const double> slice, const NodalMaterial& material,
                             const PhaseSpaceGrid& grid, double c_tau) {
  return moment(slice, grid, [&](int, int k) { return 1.0 / material.tau[k]; }) / c_tau;
}

}  // namespace phonon
