#pragma once

#include "phonon/material.hpp"
#include "phonon/phase_space.hpp"
#include "phonon/reflection.hpp"
#include "phonon/source.hpp"
#include "phonon/trace.hpp"

#include <vector>

namespace phonon {

/// Inputs of the collisionless (ballistic) system: transport plus absorption
/// at rate 1/(eps^2 tau), inflow phi at x = 0, reflection eta at x = x_max.
struct BallisticSpec {
  ReflectionModel eta = ReflectionModel::constant(1.0);
  ResolvedSource source;
  double epsilon = 1.0;
  MaterialModel material = MaterialModel::power_law_reference();
  double x_max = 0.5;
};

/// Closed form by characteristics:
///   mu > 0: phi(t - eps x/(mu nu), mu, omega) exp(-x/(mu nu tau eps))
///   mu < 0: eta(omega) phi(t - eps (2 x_max - x)/(|mu| nu), |mu|, omega)
///                      exp(-(2 x_max - x)/(|mu| nu tau eps))
/// and 0 before the characteristic arrives. Needs pointwise source densities,
/// so it rejects grid_delta sources.
double ballistic_value(double t, double x, double mu, double omega, const BallisticSpec& spec);

/// Same formula with the mu and omega profiles replaced by their cell
/// averages on `grid` (what the discrete inflow carries) and nodal material
/// values. With `dt` > 0 the time profile is averaged over [t', t' + dt) at the
/// retarded time t', as the solver does at the inflow.
double ballistic_channel_value(double t, double x, int j, int k, const PhaseSpaceGrid& grid,
                               const NodalMaterial& material, const std::vector<double>& eta_nodes,
                               const BallisticSpec& spec, double dt = 0.0);

/// Ballistic field on the cell centres at time t, laid out [i][channel].
std::vector<double> ballistic_field(double t, const PhaseSpaceGrid& grid, const BallisticSpec& spec,
                                    double dt = 0.0);

/// Delta T_0(t_n, x = 0) of the ballistic part on the grid's (mu, omega) nodes.
Trace ballistic_surface_trace(std::span<const double> times, const PhaseSpaceGrid& grid,
                              const BallisticSpec& spec);

/// Continuum M_0 = (1/C_tau) int psi(t) int int f_0(t, 0, mu, omega)/tau domega dmu dt
/// by Gauss-Legendre quadrature over the source support. Point masses in the
/// source reduce to point evaluation; a grid_delta psi is evaluated at t1.
double ballistic_measurement(const ResolvedTestFunction& psi, const BallisticSpec& spec, double c_tau);

struct MeasurementSplit {
  double m = 0.0;
  double m0 = 0.0;
  double m1 = 0.0;
};

/// M_0 from the ballistic trace on the run's own grid and time samples,
/// M_1 = M - M_0.
MeasurementSplit measurement_split(const Trace& full_run, const PhaseSpaceGrid& grid,
                                   const BallisticSpec& spec, const ResolvedTestFunction& psi);

/// Limit of M_0 as the source and test widths shrink:
///   c1 eta(omega0) exp(-2 x_max/(mu0 nu0 tau0 eps)) + c4
/// c1 and c4 are the limit integrals evaluated with the width ratios of the
/// given source and test function (theta_mu/theta, theta_omega/theta, theta_t/theta).
struct AsymptoticTerms {
  double c1 = 0.0;
  double c4 = 0.0;
  double decay = 0.0;

  double value(double eta0) const { return c1 * eta0 * decay + c4; }
  /// Predicted |M_0(eta1) - M_0(eta2)|.
  double difference(double eta1, double eta2) const;
};

AsymptoticTerms m0_asymptotic_terms(const ResolvedSource& source, const ResolvedTestFunction& psi,
                                    const MaterialModel& material, double epsilon, double x_max,
                                    double c_tau);

double m0_asymptotic(const ReflectionModel& eta, const ResolvedSource& source,
                     const ResolvedTestFunction& psi, const MaterialModel& material, double epsilon,
                     double x_max, double c_tau);

}  // namespace phonon
