#include "phonon/ballistic.hpp"
#include "phonon/measurement.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace phonon;

void run_steps(benchmark::State& state, const GridSpec& spec, double eps) {
  const MaterialModel mat = MaterialModel::power_law_reference();
  const PhaseSpaceGrid grid(spec, eps, 2.0);
  SolverConfig cfg;
  cfg.epsilon = eps;
  cfg.t_stop = 1e9;
  KineticSolver solver(cfg, grid, mat);
  long n = 0;
  for (auto _ : state) {
    solver.apply_boundaries(n);
    solver.step(n);
    ++n;
  }
  state.SetItemsProcessed(state.iterations() * grid.nx() * grid.n_channels());
}

void BM_StepDesk(benchmark::State& state) { run_steps(state, GridSpec::desk(), 1.0); }
void BM_StepFull(benchmark::State& state) { run_steps(state, GridSpec::full(), 0.5); }

void BM_StepDeskSemiImplicit(benchmark::State& state) {
  const MaterialModel mat = MaterialModel::power_law_reference();
  const PhaseSpaceGrid grid(GridSpec::desk(), 1.0, 2.0);
  SolverConfig cfg;
  cfg.collision = CollisionMode::semi_implicit;
  cfg.t_stop = 1e9;
  KineticSolver solver(cfg, grid, mat);
  long n = 0;
  for (auto _ : state) {
    solver.apply_boundaries(n);
    solver.step(n);
    ++n;
  }
  state.SetItemsProcessed(state.iterations() * grid.nx() * grid.n_channels());
}

void BM_DeskSolve(benchmark::State& state) {
  ExperimentSetup setup;
  setup.sources = {SourceSpec{}};
  const PhaseSpaceGrid grid = make_grid(setup, 1.0);
  const auto eta = ReflectionModel::tanh_param(1.5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(measurement_operator(eta, 0, setup, grid).functionals);
}

void BM_BallisticMeasurement(benchmark::State& state) {
  const MaterialModel mat = MaterialModel::power_law_reference();
  GridSpec gs = GridSpec::desk();
  gs.x_max = 1.0;
  const PhaseSpaceGrid grid(gs, 1.0, 2.0);
  SourceSpec s;
  s.kind = SourceSpec::Kind::smooth;
  s.theta_mu = s.theta_omega = 0.001;
  BallisticSpec b;
  b.eta = ReflectionModel::tanh_param(1.5, 1.0);
  b.source = resolve_source(s, grid);
  b.material = mat;
  b.x_max = 1.0;
  TestFunctionSpec ts;
  ts.kind = TestFunctionSpec::Kind::smooth;
  ts.theta = 0.1;
  const auto psi = resolve_test_function(ts, b.source, grid, mat);
  const double ct = compute_c_tau(mat.sample(grid.omega()), grid);
  for (auto _ : state) benchmark::DoNotOptimize(ballistic_measurement(psi, b, ct));
}

}  // namespace

BENCHMARK(BM_StepDesk);
BENCHMARK(BM_StepDeskSemiImplicit);
BENCHMARK(BM_StepFull);
BENCHMARK(BM_DeskSolve)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallisticMeasurement)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
