#pragma once

#include "phonon/kinetic_solver.hpp"
#include "phonon/regression.hpp"
#include "phonon/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace phonon {

/// Everything a forward experiment needs apart from eta and epsilon.
struct ExperimentSetup {
  GridSpec grid = GridSpec::desk();
  MaterialModel material = MaterialModel::power_law_reference();
  /// Template for collision/scattering/coupling options; eta, epsilon, source
  /// and t_stop are filled per run.
  SolverConfig solver;
  std::vector<SourceSpec> sources;
  /// Test functions applied to every source (J of them).
  std::vector<TestFunctionSpec> tests{TestFunctionSpec{}};
  double t_stop_margin = 1.5;
  std::optional<double> t_stop;
  int jobs = 1;
};

/// Grid for one epsilon; nu_max is taken from the material on the frequency nodes.
PhaseSpaceGrid make_grid(const ExperimentSetup& setup, double epsilon);

/// One grid_delta source per frequency node (the full source family).
std::vector<SourceSpec> sources_on_all_nodes(const GridSpec& grid, SourceSpec proto);

struct SourceRun {
  Trace trace;
  std::vector<ResolvedTestFunction> psi;
  std::vector<double> functionals;
  double t_stop = 0.0;
  double omega = 0.0;
  SolverDiagnostics diagnostics;
};

/// Lambda_eta^eps for source i: solves and returns the surface trace together
/// with the J functionals.
SourceRun measurement_operator(const ReflectionModel& eta, std::size_t source_index,
                               const ExperimentSetup& setup, const PhaseSpaceGrid& grid);

/// All sources, in parallel over the setup's worker count; results ordered by source.
std::vector<SourceRun> measure_all(const ReflectionModel& eta, const ExperimentSetup& setup,
                                   const PhaseSpaceGrid& grid);

using FunctionalMatrix = std::vector<std::vector<double>>;

FunctionalMatrix functionals_of(const std::vector<SourceRun>& runs);

/// (1/IJ) sum |M_ij - d_ij|^2
double loss(const FunctionalMatrix& model, const FunctionalMatrix& data);

double loss(const ReflectionModel& eta, const FunctionalMatrix& data, const ExperimentSetup& setup,
            const PhaseSpaceGrid& grid);

struct LandscapePoint {
  double b = 0.0;
  double loss = 0.0;
};

struct Landscape {
  double epsilon = 0.0;
  double a = 0.0;
  std::vector<LandscapePoint> points;
  double amplitude() const;
  double argmin_b() const;
};

/// Loss over b in [b_lo, b_hi] (n points) at fixed a, against data from `truth`.
Landscape landscape_scan(double a_fixed, double b_lo, double b_hi, int n_points, double epsilon,
                         const ReflectionModel& truth, const ExperimentSetup& setup);

/// Same scan against given data on a given grid.
Landscape landscape_scan(double a_fixed, double b_lo, double b_hi, int n_points,
                         const PhaseSpaceGrid& grid, const FunctionalMatrix& data,
                         const ExperimentSetup& setup);

/// Adds N(0, (level * max|d|)^2) to every entry. Deterministic for a given seed.
void add_noise(FunctionalMatrix& data, double level, std::uint64_t seed);

/// max:     max over sources and samples of |Lambda_1 - Lambda_2|
/// l1_time: max over sources of the time integral of |Lambda_1 - Lambda_2|
enum class SweepNorm { max, l1_time };

struct SweepRow {
  double epsilon = 0.0;
  double max_diff = 0.0;
  bool floored = false;
  std::vector<SourceRun> runs1, runs2;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<LinearFit> fit;
  bool identical = false;
  /// max_diff is nondecreasing in epsilon over the list
  bool monotone = false;
};

/// For each epsilon, the norm of Lambda_1 - Lambda_2 over all sources, then OLS
/// of log(max_diff) against 1/epsilon. Zero differences are floored at machine
/// epsilon and flagged; if every difference is zero the fit is skipped.
/// `visit` sees each epsilon's runs (eta1 sources first, then eta2) before they are dropped.
using SweepVisitor = std::function<void(const PhaseSpaceGrid&, const std::vector<SourceRun>&)>;

SweepResult stability_sweep(const ReflectionModel& eta1, const ReflectionModel& eta2,
                            const std::vector<double>& epsilons, const ExperimentSetup& setup,
                            bool keep_traces = false, SweepNorm norm = SweepNorm::max,
                            const SweepVisitor& visit = {});

struct ReconstructOptions {
  double learning_rate = 1.0;
  int max_iter = 100;
  double grad_tol = 1e-10;
  double loss_tol = 0.0;
  /// Cap on |step| in parameter space; 0 disables.
  double max_step = 0.05;
  double fd_relative_step = 1e-3;
  int divergence_window = 5;
};

struct ReconstructStep {
  int iter = 0;
  double a = 0.0;
  double b = 0.0;
  double loss = 0.0;
  double grad_norm = 0.0;
};

struct ReconstructResult {
  std::vector<ReconstructStep> trajectory;
  /// "loss_tol", "grad_tol", "max_iter" or "diverged"
  std::string stop_reason;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

/// Plain gradient descent on L(a, b) with central finite differences.
ReconstructResult reconstruct(double a0, double b0, const FunctionalMatrix& data, double epsilon,
                              const ExperimentSetup& setup, const ReconstructOptions& opts);

}  // namespace phonon
