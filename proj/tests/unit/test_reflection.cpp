#include "phonon/reflection.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace phonon;

TEST(Reflection, TanhAtOmegaOne) {
  EXPECT_NEAR(eta_tanh(1.0, 1.5, 1.0), 0.25 * std::tanh(-5.0) + 0.5, 1e-15);
  EXPECT_NEAR(eta_tanh(1.0, 1.5, 1.0), 0.250023, 1e-6);
}

TEST(Reflection, RangeOnBand) {
  for (double w = 0.05; w <= 2.0; w += 0.01) {
    const double v = eta_tanh(w, 1.4, 0.9);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Reflection, ModelsClamp) {
  EXPECT_DOUBLE_EQ(ReflectionModel::constant(0.75)(3.0), 0.75);
  const auto t = ReflectionModel::table(TabulatedLaw{{{0.0, -0.5}, {1.0, 1.5}}});
  EXPECT_DOUBLE_EQ(t(0.5), 0.0);
  EXPECT_DOUBLE_EQ(t(1.5), 1.0);
  const auto m = ReflectionModel::tanh_param(1.5, 1.0);
  EXPECT_DOUBLE_EQ(m(1.2), eta_tanh(1.2, 1.5, 1.0));
  const std::vector<double> nodes{0.5, 1.0};
  const auto s = m.sample(nodes);
  EXPECT_DOUBLE_EQ(s[1], eta_tanh(1.0, 1.5, 1.0));
}

TEST(Reflection, PairDiffersMostNearMidBand) {
  const double lo = std::abs(eta_tanh(1.9, 1.5, 1.0) - eta_tanh(1.9, 1.4, 0.9));
  const double mid = std::abs(eta_tanh(1.4, 1.5, 1.0) - eta_tanh(1.4, 1.4, 0.9));
  EXPECT_GT(mid, 10 * lo);
}
