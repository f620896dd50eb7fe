#pragma once

#include "phonon/material.hpp"
#include "phonon/phase_space.hpp"
#include "phonon/profile.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phonon {

/// Inflow datum phi(t, mu, omega) at x = 0 for mu > 0.
///
///   smooth:     (1/(th_mu th_om th_t)) b((t-t0)/th_t) b((mu-mu0)/th_mu) b((omega-omega0)/th_om)
///   grid_delta: 1/(dmu domega dt) on the ordinate nearest mu0, the frequency node nearest
///               omega0 and the first time step
///
/// Both carry unit mass times `amplitude`.
struct SourceSpec {
  enum class Kind { smooth, grid_delta };

  Kind kind = Kind::grid_delta;
  double mu0 = 0.935;
  double omega0 = 1.45;
  double theta_t = 0.1;
  double theta_mu = 0.05;
  double theta_omega = 0.05;
  double t0 = 0.0;
  double amplitude = 1.0;

  std::string describe() const;
};

/// A SourceSpec bound to one grid: separable profiles plus per-channel weights
/// (cell averages of the mu and omega profiles).
struct ResolvedSource {
  SourceSpec spec;
  Profile time = Profile::delta(0.0);
  Profile mu = Profile::delta(0.0);
  Profile omega = Profile::delta(0.0);
  /// mu0 / omega0 actually used: the snapped nodes for grid_delta, nominal otherwise.
  double mu_eff = 0.0;
  double omega_eff = 0.0;
  int mu_node = -1;
  int omega_node = -1;
  /// amplitude * <mu profile>_cell * <omega profile>_cell, zero on mu < 0 channels.
  std::vector<double> channel_weight;

  /// Time profile averaged over one step [t, t + dt).
  double time_factor(double t, double dt) const { return time.average(t, t + dt); }
  bool is_zero() const noexcept { return spec.amplitude == 0.0; }
};

ResolvedSource resolve_source(const SourceSpec& spec, const PhaseSpaceGrid& grid);

/// 2 x_max eps / (mu0 nu0): arrival time of the echo of a pulse launched at t = 0.
double round_trip_time(double x_max, double epsilon, double mu0, double nu0);

/// Test function psi(t) used to project the surface trace.
///   smooth:     psi_t((t - t1)/theta), psi_t the unit-mass bump on (-1, 1)
///   grid_delta: point evaluation at the trace sample nearest t1
struct TestFunctionSpec {
  enum class Kind { smooth, grid_delta };

  Kind kind = Kind::grid_delta;
  double theta = 0.0;
  /// When set, theta = theta_rel * t1 (window scales with the flight time).
  std::optional<double> theta_rel;
  std::optional<double> t1;

  std::string describe() const;
};

struct ResolvedTestFunction {
  TestFunctionSpec::Kind kind = TestFunctionSpec::Kind::grid_delta;
  double t1 = 0.0;
  double theta = 0.0;

  double operator()(double t) const;
  double lower() const noexcept;
  double upper() const noexcept;
};

/// psi_t(y) = bump_density((y + 1)/2) / 2 on (-1, 1).
double centered_bump(double y);

/// Fills t1 from the round-trip rule unless overridden.
ResolvedTestFunction resolve_test_function(const TestFunctionSpec& spec,
                                           const ResolvedSource& source,
                                           const PhaseSpaceGrid& grid,
                                           const MaterialModel& material);

/// Run length: max(margin * t1, t1 + theta, end of the source pulse).
double default_t_stop(const ResolvedTestFunction& test, const ResolvedSource& source,
                      double margin = 1.5);

}  // namespace phonon
