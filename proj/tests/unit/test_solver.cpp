#include "phonon/errors.hpp"
#include "phonon/kinetic_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace phonon;

namespace {

const MaterialModel kMat = MaterialModel::power_law_reference();

SolverConfig base(double eps) {
  SolverConfig c;
  c.epsilon = eps;
  c.t_stop = 0.5;
  return c;
}

}  // namespace

TEST(Solver, SingleNodeRelaxationConservesEnergy) {
  const PhaseSpaceGrid g(GridSpec::desk(), 1.0, 2.0);
  for (auto mode : {CollisionMode::explicit_euler, CollisionMode::semi_implicit}) {
    SolverConfig c = base(1.0);
    c.source.amplitude = 0.0;
    c.collision = mode;
    c.diagnostics = true;
    KineticSolver s(c, g, kMat);
    s.mutable_field().cell(10, g.channel(30, 4)) = 1.0;
    s.apply_boundaries(0);
    s.step(0);
    EXPECT_LT(s.diagnostics().max_conservation_ratio, 1e-14);
  }
}

TEST(Solver, CflViolationIsSolverError) {
  GridSpec spec = GridSpec::desk();
  spec.dt_override = 0.1;
  const PhaseSpaceGrid g(spec, 1.0, 2.0);
  EXPECT_THROW(KineticSolver(base(1.0), g, kMat), SolverError);
}

TEST(Solver, ExplicitRelaxationRateAboveOneIsRejected) {
  GridSpec spec = GridSpec::desk();
  spec.dx_cap = 0.25;
  spec.dx_ratio = 1e-9;
  spec.eps2_cap = false;
  spec.cfl = 1.0;
  const PhaseSpaceGrid g(spec, 0.05, 2.0);
  SolverConfig c = base(0.05);
  EXPECT_THROW(KineticSolver(c, g, kMat), ConfigError);
  c.collision = CollisionMode::semi_implicit;
  EXPECT_NO_THROW(KineticSolver(c, g, kMat));
}

TEST(Solver, DeterministicTraces) {
  const PhaseSpaceGrid g(GridSpec::desk(), 0.5, 2.0);
  const auto a = KineticSolver(base(0.5), g, kMat).solve();
  const auto b = KineticSolver(base(0.5), g, kMat).solve();
  ASSERT_EQ(a.delta_t.size(), b.delta_t.size());
  EXPECT_EQ(a.delta_t, b.delta_t);
  EXPECT_EQ(static_cast<long>(a.t.size()), a.steps + 1);
}

TEST(Solver, CoupledWithFullReflectionDecouples) {
  const PhaseSpaceGrid g(GridSpec::desk(), 1.0, 2.0);
  SolverConfig r = base(1.0);
  r.eta = ReflectionModel::constant(1.0);
  SolverConfig c = r;
  c.coupling = CouplingMode::coupled;
  const auto a = KineticSolver(r, g, kMat).solve();
  const auto b = KineticSolver(c, g, kMat).solve();
  EXPECT_EQ(a.delta_t, b.delta_t);
}

TEST(Solver, CoupledRejectsInconsistentInterface) {
  const PhaseSpaceGrid g(GridSpec::desk(), 1.0, 2.0);
  SolverConfig c = base(1.0);
  c.coupling = CouplingMode::coupled;
  EXPECT_THROW(KineticSolver(c, g, kMat), InterfaceError);
}

TEST(Solver, StressRunStaysInBounds) {
  const PhaseSpaceGrid g(GridSpec::desk(), 0.25, 2.0);
  SolverConfig c = base(0.25);
  c.source.kind = SourceSpec::Kind::smooth;
  c.source.theta_t = 0.2;
  c.source.theta_omega = 0.3;
  c.diagnostics = true;
  c.t_stop = 0.75;
  const auto r = KineticSolver(c, g, kMat).solve();
  EXPECT_EQ(r.diagnostics.steps_checked, r.steps);
  EXPECT_LE(r.diagnostics.max_conservation_ratio, 1e-12);
  EXPECT_TRUE(r.diagnostics.bounds_ok);
  EXPECT_GE(r.diagnostics.min_value, 0.0);
}

TEST(Solver, EquilibriumIsStationary) {
  const PhaseSpaceGrid g(GridSpec::desk(), 1.0, 2.0);
  SolverConfig c = base(1.0);
  c.source.amplitude = 0.0;
  c.eta = ReflectionModel::constant(1.0);
  c.equilibrium_level = 0.3;
  const auto r = KineticSolver(c, g, kMat).solve();
  // Delta T of f = level * C_omega is level * <C/tau>/C_tau = level
  for (double v : r.delta_t) EXPECT_NEAR(v, 0.3, 1e-12);
}

TEST(Solver, BallisticEchoNearRoundTripAtEpsilonFour) {
  const auto g = build_full_grid(4.0);
  SolverConfig c = base(4.0);
  c.t_stop = 4.5;
  const auto r = KineticSolver(c, g, kMat).solve();
  // after the injection transient, the reading peaks at the reflected pulse
  std::size_t best = 0;
  for (std::size_t n = 0; n < r.t.size(); ++n)
    if (r.t[n] > 1.0 && (best == 0 || r.delta_t[n] > r.delta_t[best])) best = n;
  EXPECT_NEAR(r.t[best], 2.0 * 0.5 * 4.0 / (0.935 * 1.45), 0.1);
  EXPECT_NEAR(r.t[best], 3.0, 0.15);
}

TEST(Solver, DiffusiveReadingDecaysAfterInjection) {
  const PhaseSpaceGrid g(GridSpec::desk(), 0.125, 2.0);
  SolverConfig c = base(0.125);
  c.t_stop = 0.3;
  const auto r = KineticSolver(c, g, kMat).solve();
  const auto peak = std::max_element(r.delta_t.begin(), r.delta_t.end()) - r.delta_t.begin();
  EXPECT_LT(r.t[peak], 0.02);
  for (std::size_t n = peak + 1; n < r.delta_t.size(); ++n)
    if (r.t[n] > 0.005) EXPECT_LE(r.delta_t[n], r.delta_t[n - 1] * (1 + 1e-12));
}
