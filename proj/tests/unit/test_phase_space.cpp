#include "phonon/errors.hpp"
#include "phonon/phase_space.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace phonon;

TEST(Grid, FullEpsilonHalf) {
  const auto g = build_full_grid(0.5);
  EXPECT_NEAR(g.dx(), 0.004, 1e-15);
  EXPECT_EQ(g.nx(), 125);
  EXPECT_NEAR(g.dt(), 0.001, 1e-15);
}

TEST(Grid, FullEpsilonEighth) {
  const auto g = build_full_grid(0.125);
  EXPECT_NEAR(g.dx(), 0.001, 1e-15);
  EXPECT_EQ(g.nx(), 500);
  EXPECT_NEAR(g.dt(), 6.25e-5, 1e-18);
}

TEST(Grid, FullEpsilonFour) {
  const auto g = build_full_grid(4.0);
  EXPECT_NEAR(g.dx(), 0.004, 1e-15);
  EXPECT_NEAR(g.dt(), 8e-3, 1e-15);
}

TEST(Grid, EpsilonSquaredCapBinds) {
  GridSpec s = GridSpec::full();
  s.dx_cap = 1.0;
  s.dx_ratio = 1e-9;
  const PhaseSpaceGrid g(s, 0.01, 2.0);
  EXPECT_NEAR(g.dt(), 1e-4, 1e-18);
}

TEST(Grid, DeskRule) {
  const PhaseSpaceGrid g(GridSpec::desk(), 0.125, 2.0);
  EXPECT_NEAR(g.dx(), 0.005, 1e-15);
  EXPECT_EQ(g.n_mu(), 40);
  EXPECT_EQ(g.n_omega(), 10);
  EXPECT_NEAR(g.omega()[0], 0.2, 1e-15);
  EXPECT_NEAR(g.omega()[9], 2.0, 1e-12);
}

TEST(Grid, OrdinatesSymmetricAscendingWithUnitCellWeights) {
  const auto g = build_full_grid(1.0);
  EXPECT_EQ(g.n_mu(), 200);
  const auto mu = g.mu();
  const auto w = g.mu_weights();
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 2.0, 1e-13);
  for (int j = 0; j < g.n_mu(); ++j) {
    EXPECT_DOUBLE_EQ(mu[j], -mu[g.mirror(j)]);
    EXPECT_NE(mu[j], 0.0);
    if (j > 0) EXPECT_LT(mu[j - 1], mu[j]);
    EXPECT_EQ(mu[j] < 0.0, j < g.half_mu());
  }
}

TEST(Grid, ChannelNumbering) {
  const auto g = build_full_grid(1.0);
  EXPECT_EQ(g.channel(3, 2), 2 * 200 + 3);
  EXPECT_EQ(g.n_channels(), 8000);
}

TEST(Grid, NearestOrdinate) {
  const auto full = build_full_grid(1.0);
  EXPECT_NEAR(full.mu()[full.nearest_mu(0.935)], 0.935, 1e-12);
  const PhaseSpaceGrid desk(GridSpec::desk(), 1.0, 2.0);
  EXPECT_NEAR(desk.mu()[desk.nearest_mu(0.935)], 0.925, 1e-12);
  // 0.95 sits exactly between 0.925 and 0.975: lower wins
  EXPECT_NEAR(desk.mu()[desk.nearest_mu(0.95)], 0.925, 1e-12);
  EXPECT_NEAR(desk.omega()[desk.nearest_omega(1.45)], 1.4, 1e-12);
}

TEST(Grid, MomentIsWeightedSum) {
  const PhaseSpaceGrid g(GridSpec::desk(), 1.0, 2.0);
  std::vector<double> v(g.n_channels(), 1.0);
  EXPECT_NEAR(moment(v, g, [](int, int) { return 1.0; }), 2.0 * 10 * 0.2, 1e-12);
}

TEST(Grid, FingerprintDependsOnEpsilon) {
  EXPECT_EQ(build_full_grid(1.0).fingerprint(), build_full_grid(1.0).fingerprint());
  EXPECT_NE(build_full_grid(1.0).fingerprint(), build_full_grid(0.5).fingerprint());
}
