#pragma once

#include "phonon/material.hpp"
#include "phonon/phase_space.hpp"
#include "phonon/reflection.hpp"
#include "phonon/source.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phonon {

enum class CollisionMode { explicit_euler, semi_implicit };

/// bgk:             (1/(eps^2 tau)) (Lf - f)
/// absorption_only: -(1/(eps^2 tau)) f, no re-emission (the ballistic system)
/// none:            pure transport
enum class Scattering { bgk, absorption_only, none };

enum class CouplingMode { reflective_only, coupled };

struct SubstrateSpec {
  double nu_factor = 0.5;
  double tau_factor = 4.0;
  /// Substrate thickness in units of the transducer length x_max.
  double length_factor = 4.0;
};

struct SolverConfig {
  double epsilon = 1.0;
  CollisionMode collision = CollisionMode::explicit_euler;
  Scattering scattering = Scattering::bgk;
  CouplingMode coupling = CouplingMode::reflective_only;
  ReflectionModel eta = ReflectionModel::tanh_param(1.5, 1.0);
  double interface_c = 1.0;
  SubstrateSpec substrate;
  SourceSpec source;
  double t_stop = 1.0;
  /// Field snapshots are taken at the step nearest each requested time.
  std::vector<double> snapshot_times;
  /// Check conservation of the closure and the max principle every step.
  bool diagnostics = false;
  /// Start from f = level * C_omega and add level * C_omega to the inflow.
  std::optional<double> equilibrium_level;
};

struct Snapshot {
  double t = 0.0;
  int step = 0;
  /// Interior cells, laid out [i][channel].
  std::vector<double> values;
};

struct SolverDiagnostics {
  long steps_checked = 0;
  /// max over steps and cells of |sum w (Lf - f)/tau| / sum w |f|/tau
  double max_conservation_ratio = 0.0;
  double min_value = 0.0;
  /// max over the field of f / C_omega, and the bound c_m it must not exceed
  double max_scaled_value = 0.0;
  double c_m = 0.0;
  bool bounds_ok = true;
};

struct SolveResult {
  std::vector<double> t;
  std::vector<double> delta_t;
  std::vector<Snapshot> snapshots;
  SolverDiagnostics diagnostics;
  long steps = 0;
  double c_tau = 0.0;
};

/// First-order upwind / forward-Euler integrator for
///
///   eps d_t f + mu nu d_x f = (1/(eps tau)) (Lf - f),   Lf = (C_omega/C_tau) <f/tau>
///
/// on x in [0, x_max] with inflow phi at x = 0 and reflection at x = x_max
/// (optionally coupled to a substrate field g on [x_max, x_max + L_s]).
/// One instance owns its fields; grid and material are read-only.
class KineticSolver {
 public:
  KineticSolver(SolverConfig config, const PhaseSpaceGrid& grid, const MaterialModel& material);

  /// Fills ghost rows for time level t_n = n dt.
  void apply_boundaries(long n);
  /// Advances one step from t_n to t_{n+1}.
  void step(long n);
  /// Marches from t = 0 to t_stop, recording the surface temperature every step.
  SolveResult solve();

  /// Surface temperature at x = 0 from the current ghost/first-cell values.
  double surface_temperature() const;

  const DistributionField& field() const noexcept { return f_; }
  const DistributionField& substrate_field() const noexcept { return g_; }
  DistributionField& mutable_field() noexcept { return f_; }
  long step_count() const noexcept { return n_steps_; }
  double c_tau() const noexcept { return c_tau_; }
  const InterfaceCoefficients& interface(int k) const { return iface_[k]; }
  const SolverDiagnostics& diagnostics() const noexcept { return diag_; }

 private:
  struct Medium {
    int nx = 0;
    std::vector<double> cfl;    // dt |mu| nu / (eps dx) per channel
    std::vector<double> wt;     // w_mu w_omega / tau per channel
    std::vector<double> lcoef;  // C_omega / C_tau per channel
    std::vector<double> rate;   // dt / (eps^2 tau) per channel
    double c_tau = 0.0;
  };

  Medium build_medium(const NodalMaterial& m, int nx) const;
  void advance(const Medium& md, const DistributionField& cur, DistributionField& nxt, long n,
               bool check);
  [[noreturn]] void report_non_finite(const DistributionField& fld, long n, const char* which) const;

  SolverConfig cfg_;
  const PhaseSpaceGrid& grid_;
  NodalMaterial mat_;
  NodalMaterial sub_mat_;
  ResolvedSource src_;
  std::vector<double> eta_;
  std::vector<InterfaceCoefficients> iface_;
  Medium fm_, gm_;
  double c_tau_ = 0.0;
  long n_steps_ = 0;
  DistributionField f_, f_next_, g_, g_next_;
  SolverDiagnostics diag_;
};

}  // namespace phonon
