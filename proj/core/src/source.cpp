#include "phonon/source.hpp"

#include "phonon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phonon {

std::string SourceSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::grid_delta) {
    os << "grid_delta(mu0=" << mu0 << ",omega0=" << omega0 << ",amplitude=" << amplitude << ")";
  } else {
    os << "smooth(mu0=" << mu0 << ",omega0=" << omega0 << ",theta_t=" << theta_t
       << ",theta_mu=" << theta_mu << ",theta_omega=" << theta_omega << ",t0=" << t0
       << ",amplitude=" << amplitude << ")";
  }
  return os.str();
}

ResolvedSource resolve_source(const SourceSpec& spec, const PhaseSpaceGrid& grid) {
  if (!(spec.mu0 > 0.0 && spec.mu0 <= 1.0)) throw ConfigError("source.mu0 must lie in (0, 1]");
  if (!std::isfinite(spec.amplitude)) throw ConfigError("source.amplitude must be finite");

  ResolvedSource r;
  r.spec = spec;
  const auto om = grid.omega();
  const double band_lo = om.front() - 0.5 * grid.d_omega();
  const double band_hi = om.back() + 0.5 * grid.d_omega();

  if (spec.kind == SourceSpec::Kind::grid_delta) {
    r.mu_node = grid.nearest_mu(spec.mu0);
    r.omega_node = grid.nearest_omega(spec.omega0);
    r.mu_eff = grid.mu()[r.mu_node];
    r.omega_eff = om[r.omega_node];
    if (r.mu_eff <= 0.0) throw ConfigError("source.mu0 snaps to a non-positive ordinate");
    r.mu = Profile::delta(r.mu_eff);
    r.omega = Profile::delta(r.omega_eff);
    r.time = Profile::boxcar(spec.t0, spec.t0 + grid.dt());
  } else {
    if (!(spec.theta_t > 0.0) || !(spec.theta_mu > 0.0) || !(spec.theta_omega > 0.0))
      throw ConfigError("source: theta_t, theta_mu, theta_omega must be positive");
    if (spec.mu0 + spec.theta_mu > 1.0 + 1e-12)
      throw ConfigError("source: mu support [mu0, mu0 + theta_mu] must stay inside (0, 1]");
    if (spec.omega0 < band_lo - 1e-12 || spec.omega0 + spec.theta_omega > band_hi + 1e-12)
      throw ConfigError("source: omega support [omega0, omega0 + theta_omega] must lie inside the "
                        "grid band [" + std::to_string(band_lo) + ", " + std::to_string(band_hi) + "]");
    r.mu_eff = spec.mu0;
    r.omega_eff = spec.omega0;
    r.mu = Profile::bump(spec.mu0, spec.theta_mu);
    r.omega = Profile::bump(spec.omega0, spec.theta_omega);
    r.time = Profile::bump(spec.t0, spec.theta_t);
  }

  r.channel_weight.assign(grid.n_channels(), 0.0);
  std::vector<double> wmu(grid.n_mu(), 0.0), wom(grid.n_omega(), 0.0);
  for (int j = grid.half_mu(); j < grid.n_mu(); ++j) {
    const auto [lo, hi] = grid.mu_cell(j);
    wmu[j] = r.mu.average(lo, hi);
  }
  for (int k = 0; k < grid.n_omega(); ++k) {
    const auto [lo, hi] = grid.omega_cell(k);
    wom[k] = r.omega.average(lo, hi);
  }
  for (int k = 0; k < grid.n_omega(); ++k)
    for (int j = grid.half_mu(); j < grid.n_mu(); ++j)
      r.channel_weight[grid.channel(j, k)] = spec.amplitude * wmu[j] * wom[k];
  return r;
}

double round_trip_time(double x_max, double epsilon, double mu0, double nu0) {
  return 2.0 * x_max * epsilon / (mu0 * nu0);
}

std::string TestFunctionSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind == Kind::grid_delta ? "grid_delta(" : "smooth(theta=");
  if (kind == Kind::smooth) {
    if (theta_rel) os << theta_rel.value() << "*t1";
    else os << theta;
    if (t1) os << ",";
  }
  if (t1) os << "t1=" << *t1;
  os << ")";
  return os.str();
}

double centered_bump(double y) { return 0.5 * bump_density(0.5 * (y + 1.0)); }

double ResolvedTestFunction::operator()(double t) const {
  if (kind == TestFunctionSpec::Kind::grid_delta) return t == t1 ? 1.0 : 0.0;
  return centered_bump((t - t1) / theta);
}

double ResolvedTestFunction::lower() const noexcept { return t1 - theta; }
double ResolvedTestFunction::upper() const noexcept { return t1 + theta; }

ResolvedTestFunction resolve_test_function(const TestFunctionSpec& spec,
                                           const ResolvedSource& source,
                                           const PhaseSpaceGrid& grid,
                                           const MaterialModel& material) {
  ResolvedTestFunction r;
  r.kind = spec.kind;
  r.t1 = spec.t1 ? *spec.t1
                 : round_trip_time(grid.x_max(), grid.epsilon(), source.mu_eff,
                                   material.nu(source.omega_eff));
  if (!(r.t1 > 0.0)) throw ConfigError("test_function: t1 must be positive");
  if (spec.kind == TestFunctionSpec::Kind::smooth) {
    r.theta = spec.theta_rel ? *spec.theta_rel * r.t1 : spec.theta;
    if (!(r.theta > 0.0)) throw ConfigError("test_function.theta must be positive");
  }
  if (r.lower() < 0.0)
    throw ConfigError("test_function: window [t1 - theta, t1 + theta] starts before t = 0");
  return r;
}

double default_t_stop(const ResolvedTestFunction& test, const ResolvedSource& source,
                      double margin) {
  return std::max({margin * test.t1, test.upper(), source.time.upper()});
}

}  // namespace phonon
