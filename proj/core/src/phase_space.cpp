#include "phonon/phase_space.hpp"

#include "phonon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phonon {

GridSpec GridSpec::full() {
  GridSpec g;
  g.name = "full";
  return g;
}

GridSpec GridSpec::desk() {
  GridSpec g;
  g.name = "desk";
  g.dx_cap = 0.01;
  g.dx_ratio = 25.0;
  g.n_mu = 40;
  g.omega_min = 0.2;
  g.d_omega = 0.2;
  g.n_omega = 10;
  return g;
}

PhaseSpaceGrid::PhaseSpaceGrid(const GridSpec& spec, double epsilon, double nu_max)
    : spec_(spec), epsilon_(epsilon), nu_max_(nu_max), x_max_(spec.x_max) {
  if (!(epsilon > 0.0)) throw ConfigError("grid: epsilon must be positive");
  if (!(spec.x_max > 0.0)) throw ConfigError("grid.x_max must be positive");
  if (!(spec.dx_cap > 0.0) || !(spec.dx_ratio > 0.0))
    throw ConfigError("grid.dx_cap and grid.dx_ratio must be positive");
  if (spec.n_mu < 2 || spec.n_mu % 2 != 0)
    throw ConfigError("grid.n_mu must be a positive even number");
  if (spec.n_omega < 1 || !(spec.d_omega > 0.0) || !(spec.omega_min > 0.0))
    throw ConfigError("grid: omega nodes must be positive and strictly increasing");
  if (!(spec.cfl > 0.0)) throw ConfigError("grid.cfl must be positive");
  if (!(nu_max > 0.0)) throw ConfigError("grid: nu_max must be positive");

  const double dx_rule = std::min(spec.dx_cap, epsilon / spec.dx_ratio);
  nx_ = static_cast<int>(std::ceil(x_max_ / dx_rule - 1e-9));
  dx_ = x_max_ / nx_;

  if (spec.dt_override) {
    if (!(*spec.dt_override > 0.0)) throw ConfigError("grid.dt must be positive");
    dt_ = *spec.dt_override;
  } else {
    dt_ = spec.cfl * epsilon * dx_ / nu_max;
    if (spec.eps2_cap) dt_ = std::min(dt_, epsilon * epsilon);
  }

  const int n = spec.n_mu;
  const double dmu = 2.0 / n;
  mu_.resize(n);
  mu_w_.assign(n, dmu);
  for (int j = 0; j < n / 2; ++j) {
    const double m = (n / 2 - j - 0.5) * dmu;
    mu_[j] = -m;
    mu_[n - 1 - j] = m;
  }

  omega_.resize(spec.n_omega);
  omega_w_.assign(spec.n_omega, spec.d_omega);
  for (int k = 0; k < spec.n_omega; ++k) omega_[k] = spec.omega_min + k * spec.d_omega;
}

std::pair<double, double> PhaseSpaceGrid::mu_cell(int j) const noexcept {
  const double h = 0.5 * d_mu();
  return {mu_[j] - h, mu_[j] + h};
}

std::pair<double, double> PhaseSpaceGrid::omega_cell(int k) const noexcept {
  const double h = 0.5 * spec_.d_omega;
  return {omega_[k] - h, omega_[k] + h};
}

int PhaseSpaceGrid::nearest_mu(double mu) const {
  int best = 0;
  double best_d = std::abs(mu - mu_[0]);
  for (int j = 1; j < n_mu(); ++j) {
    const double d = std::abs(mu - mu_[j]);
    // strict comparison keeps the lower ordinate on ties; the slack absorbs
    // representation error in values like 0.935 vs 0.925 / 0.945
    if (d < best_d - 1e-12) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

int PhaseSpaceGrid::nearest_omega(double omega) const {
  int best = 0;
  double best_d = std::abs(omega - omega_[0]);
  for (int k = 1; k < n_omega(); ++k) {
    const double d = std::abs(omega - omega_[k]);
    if (d < best_d - 1e-12) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

std::string PhaseSpaceGrid::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "eps=" << epsilon_ << ";x_max=" << x_max_ << ";nx=" << nx_ << ";dx=" << dx_
     << ";dt=" << dt_ << ";n_mu=" << n_mu() << ";omega_min=" << spec_.omega_min
     << ";d_omega=" << spec_.d_omega << ";n_omega=" << n_omega() << ";nu_max=" << nu_max_;
  return os.str();
}

PhaseSpaceGrid build_full_grid(double epsilon) {
  return PhaseSpaceGrid(GridSpec::full(), epsilon, 2.0);
}

double moment(std::span<const double> values, const PhaseSpaceGrid& grid,
              const std::function<double(int, int)>& weight) {
  const auto wm = grid.mu_weights();
  const auto wo = grid.omega_weights();
  double sum = 0.0;
  for (int k = 0; k < grid.n_omega(); ++k)
    for (int j = 0; j < grid.n_mu(); ++j)
      sum += wm[j] * wo[k] * weight(j, k) * values[grid.channel(j, k)];
  return sum;
}

double moment(std::span<const double> values, std::span<const double> channel_weight) {
  double sum = 0.0;
  for (std::size_t c = 0; c < values.size(); ++c) sum += channel_weight[c] * values[c];
  return sum;
}

DistributionField::DistributionField(int nx, int n_channels)
    : nx_(nx), nch_(n_channels),
      data_(static_cast<std::size_t>(nx + 2) * static_cast<std::size_t>(n_channels), 0.0) {}

std::vector<double> DistributionField::interior() const {
  return {data_.begin() + nch_, data_.end() - nch_};
}

void DistributionField::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

}  // namespace phonon
