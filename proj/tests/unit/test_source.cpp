#include "phonon/errors.hpp"
#include "phonon/source.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace phonon;

TEST(Profile, BumpHasUnitMass) {
  EXPECT_NEAR(bump_cdf(1.0), 1.0, 1e-12);
  EXPECT_NEAR(bump_cdf(0.5), 0.5, 1e-12);
  EXPECT_EQ(bump_density(0.0), 0.0);
  EXPECT_EQ(bump_density(1.2), 0.0);
  const auto p = Profile::bump(2.0, 0.5);
  EXPECT_NEAR(p.mass(1.0, 3.0), 1.0, 1e-12);
  EXPECT_NEAR(p.mass(2.0, 2.25), 0.5, 1e-12);
}

TEST(Profile, CenteredBump) {
  double s = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) s += centered_bump(-1.0 + (i + 0.5) * 2.0 / n) * 2.0 / n;
  EXPECT_NEAR(s, 1.0, 1e-9);
  EXPECT_NEAR(centered_bump(0.3), centered_bump(-0.3), 1e-14);
}

TEST(Profile, DeltaAndBoxcar) {
  const auto d = Profile::delta(1.0);
  EXPECT_EQ(d.mass(0.5, 1.0), 0.0);
  EXPECT_EQ(d.mass(1.0, 1.5), 1.0);
  EXPECT_THROW(d.density(1.0), std::logic_error);
  const auto b = Profile::boxcar(0.0, 0.1);
  EXPECT_NEAR(b.density(0.05), 10.0, 1e-12);
  EXPECT_NEAR(b.average(0.0, 0.1), 10.0, 1e-12);
}

TEST(Source, GridDeltaCarriesUnitMass) {
  const auto g = build_full_grid(1.0);
  SourceSpec s;
  const auto r = resolve_source(s, g);
  EXPECT_NEAR(r.mu_eff, 0.935, 1e-12);
  EXPECT_NEAR(r.omega_eff, 1.45, 1e-12);
  // 1/(dmu domega) on one channel, 1/dt over the first step
  EXPECT_NEAR(r.channel_weight[g.channel(r.mu_node, r.omega_node)], 1.0 / (0.01 * 0.05), 1e-9);
  EXPECT_NEAR(r.time_factor(0.0, g.dt()), 1.0 / g.dt(), 1e-9);
  EXPECT_EQ(r.time_factor(g.dt(), g.dt()), 0.0);
  double total = 0.0;
  for (int k = 0; k < g.n_omega(); ++k)
    for (int j = 0; j < g.n_mu(); ++j) total += r.channel_weight[g.channel(j, k)] * g.mu_weights()[j] * g.omega_weights()[k];
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Source, SmoothSupportValidated) {
  const auto g = build_full_grid(1.0);
  SourceSpec s;
  s.kind = SourceSpec::Kind::smooth;
  s.mu0 = 0.98;
  EXPECT_THROW(resolve_source(s, g), ConfigError);
  s.mu0 = 0.9;
  s.omega0 = 2.0;
  EXPECT_THROW(resolve_source(s, g), ConfigError);
  s.omega0 = 1.4;
  EXPECT_NO_THROW(resolve_source(s, g));
}

TEST(Source, RoundTripTimeAtEpsilonFour) {
  const auto g = build_full_grid(4.0);
  const auto m = MaterialModel::power_law_reference();
  const auto src = resolve_source(SourceSpec{}, g);
  const auto psi = resolve_test_function(TestFunctionSpec{}, src, g, m);
  EXPECT_NEAR(psi.t1, 2.0 * 0.5 * 4.0 / (0.935 * 1.45), 1e-12);
  EXPECT_NEAR(psi.t1, 3.0, 0.06);
  EXPECT_NEAR(default_t_stop(psi, src), 1.5 * psi.t1, 1e-12);
}

TEST(Source, TestFunctionWindow) {
  const auto g = build_full_grid(1.0);
  const auto m = MaterialModel::power_law_reference();
  const auto src = resolve_source(SourceSpec{}, g);
  TestFunctionSpec t;
  t.kind = TestFunctionSpec::Kind::smooth;
  t.theta_rel = 0.5;
  const auto psi = resolve_test_function(t, src, g, m);
  EXPECT_NEAR(psi.theta, 0.5 * psi.t1, 1e-15);
  t.theta_rel.reset();
  t.theta = 10.0;
  EXPECT_THROW(resolve_test_function(t, src, g, m), ConfigError);
}
