#include "phonon/ballistic.hpp"
#include "phonon/kinetic_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace phonon;

namespace {

BallisticSpec unit_spec() {
  BallisticSpec s;
  s.material = MaterialModel(PowerLaw{1.0, 0.0}, PowerLaw{1.0, 0.0}, PowerLaw{1.0, 0.0});
  s.epsilon = 1.0;
  s.x_max = 1.0;
  s.source.spec.kind = SourceSpec::Kind::smooth;
  s.source.spec.amplitude = 0.1;
  s.source.time = Profile::boxcar(1.0, 1.1);
  s.source.mu = Profile::boxcar(0.5, 1.5);
  s.source.omega = Profile::boxcar(0.5, 1.5);
  return s;
}

}  // namespace

TEST(Ballistic, CharacteristicValue) {
  const auto s = unit_spec();
  EXPECT_EQ(ballistic_value(1.05, 1.0, 1.0, 1.0, s), 0.0);
  EXPECT_NEAR(ballistic_value(2.05, 1.0, 1.0, 1.0, s), std::exp(-1.0), 1e-14);
  EXPECT_EQ(ballistic_value(2.2, 1.0, 1.0, 1.0, s), 0.0);
}

TEST(Ballistic, ReflectedValue) {
  auto s = unit_spec();
  s.eta = ReflectionModel::constant(0.5);
  // path length 2 x_max - x = 2 at x = 0
  EXPECT_NEAR(ballistic_value(3.05, 0.0, -1.0, 1.0, s), 0.5 * std::exp(-2.0), 1e-14);
  EXPECT_EQ(ballistic_value(2.05, 0.0, -1.0, 1.0, s), 0.0);
}

TEST(Ballistic, AsymptoticDecay) {
  const auto g = build_full_grid(1.0);
  const auto m = MaterialModel::power_law_reference();
  SourceSpec spec;
  spec.kind = SourceSpec::Kind::smooth;
  spec.mu0 = 0.935;
  spec.omega0 = 1.45;
  const auto src = resolve_source(spec, g);
  TestFunctionSpec t;
  t.kind = TestFunctionSpec::Kind::smooth;
  t.theta = 0.05;
  const auto psi = resolve_test_function(t, src, g, m);
  const auto terms = m0_asymptotic_terms(src, psi, m, 1.0, 1.0, 4.1);
  EXPECT_NEAR(terms.decay, std::exp(-2.0 / 0.935), 1e-12);
}

TEST(Ballistic, SolverConvergesToClosedForm) {
  const auto m = MaterialModel::power_law_reference();
  double errs[2];
  double dxs[2] = {0.01, 0.005};
  for (int l = 0; l < 2; ++l) {
    GridSpec gs;
    gs.x_max = 1.0;
    gs.dx_cap = dxs[l];
    gs.dx_ratio = 1.0;
    gs.n_mu = 20;
    gs.omega_min = 1.5;
    gs.d_omega = 0.1;
    gs.n_omega = 6;
    gs.eps2_cap = false;
    const PhaseSpaceGrid g(gs, 1.0, 2.0);
    SolverConfig c;
    c.epsilon = 1.0;
    c.scattering = Scattering::absorption_only;
    c.eta = ReflectionModel::constant(0.8);
    c.source.kind = SourceSpec::Kind::smooth;
    c.source.mu0 = 0.8;
    c.source.theta_mu = 0.2;
    c.source.omega0 = 1.5;
    c.source.theta_omega = 0.5;
    c.source.theta_t = 1.5;
    c.t_stop = 1.25;
    c.snapshot_times = {1.2};
    const auto r = KineticSolver(c, g, m).solve();
    ASSERT_EQ(r.snapshots.size(), 1u);
    BallisticSpec b;
    b.eta = c.eta;
    b.source = resolve_source(c.source, g);
    b.epsilon = 1.0;
    b.material = m;
    b.x_max = 1.0;
    const auto exact = ballistic_field(r.snapshots[0].t, g, b, g.dt());
    double err = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
      err = std::max(err, std::abs(exact[i] - r.snapshots[0].values[i]));
      peak = std::max(peak, std::abs(exact[i]));
    }
    errs[l] = err / peak;
  }
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[1], 0.02);
}
