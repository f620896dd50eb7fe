#include "phonon/errors.hpp"
#include "phonon/material.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace phonon;

TEST(Material, PowerLawReference) {
  const auto m = MaterialModel::power_law_reference();
  EXPECT_DOUBLE_EQ(m.nu(1.45), 1.45);
  EXPECT_DOUBLE_EQ(m.tau(2.0), 0.5);
  EXPECT_DOUBLE_EQ(m.c_omega(0.3), 1.0);
  EXPECT_DOUBLE_EQ(m.nu_derivative(0.7), 1.0);
}

TEST(Material, CTauOnFullGrid) {
  const auto grid = build_full_grid(1.0);
  const auto m = MaterialModel::power_law_reference();
  EXPECT_NEAR(compute_c_tau(m.sample(grid.omega()), grid), 4.1, 1e-12);
}

TEST(Material, CTauMatchesMomentOfCOverTau) {
  const auto grid = build_full_grid(0.5);
  const auto m = MaterialModel::power_law_reference();
  const auto nodal = m.sample(grid.omega());
  std::vector<double> ones(grid.n_channels(), 1.0);
  const double viamoment = moment(ones, grid, [&](int, int k) { return nodal.c_omega[k] / nodal.tau[k]; });
  EXPECT_NEAR(viamoment, compute_c_tau(nodal, grid), 1e-13);
}

TEST(Material, TemperatureOfSingleNode) {
  const auto grid = build_full_grid(1.0);
  const auto m = MaterialModel::power_law_reference();
  const auto nodal = m.sample(grid.omega());
  const double ct = compute_c_tau(nodal, grid);
  std::vector<double> f(grid.n_channels(), 0.0);
  const int j = 150, k = 28;
  f[grid.channel(j, k)] = 3.0;
  const double expect = grid.mu_weights()[j] * grid.omega_weights()[k] * 3.0 / nodal.tau[k] / ct;
  EXPECT_NEAR(temperature_deviation(f, nodal, grid, ct), expect, 1e-15);
}

TEST(Material, TableIsPiecewiseConstant) {
  FrequencyLaw law(TabulatedLaw{{{0.5, 2.0}, {1.0, 3.0}, {1.5, 5.0}}});
  EXPECT_DOUBLE_EQ(law(0.1), 2.0);
  EXPECT_DOUBLE_EQ(law(0.99), 2.0);
  EXPECT_DOUBLE_EQ(law(1.0), 3.0);
  EXPECT_DOUBLE_EQ(law(9.0), 5.0);
  EXPECT_THROW(FrequencyLaw(TabulatedLaw{{{1.0, 1.0}, {1.0, 2.0}}}), ConfigError);
}

TEST(Material, RejectsZeroRelaxationTimeNamingTheNode) {
  MaterialModel m(PowerLaw{1.0, 1.0}, TabulatedLaw{{{0.0, 1.0}, {1.0, 0.0}}}, PowerLaw{1.0, 0.0});
  std::vector<double> nodes{0.5, 1.25};
  try {
    m.validate(nodes);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("omega=1.25"), std::string::npos) << msg;
    EXPECT_NE(msg.find("bounded below"), std::string::npos) << msg;
    EXPECT_EQ(msg.find("Assumption"), std::string::npos) << msg;
  }
}

TEST(Material, TauMinBound) {
  MaterialBounds b;
  b.tau_min = 0.6;
  MaterialModel m(PowerLaw{1.0, 1.0}, PowerLaw{1.0, -1.0}, PowerLaw{1.0, 0.0}, b);
  std::vector<double> ok{0.5, 1.5};
  std::vector<double> bad{0.5, 2.0};
  EXPECT_NO_THROW(m.validate(ok));
  EXPECT_THROW(m.validate(bad), ConfigError);
}

TEST(Material, ScaledSubstrate) {
  const auto s = MaterialModel::power_law_reference().scaled(0.5, 4.0);
  EXPECT_DOUBLE_EQ(s.nu(1.2), 0.6);
  EXPECT_DOUBLE_EQ(s.tau(2.0), 2.0);
}

TEST(Interface, ReferenceTriple) {
  const auto r = reduce_interface_coefficients(0.5, 1.0, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(r.zeta_t, 0.5);
  EXPECT_DOUBLE_EQ(r.zeta_s, 1.0);
  EXPECT_DOUBLE_EQ(r.eta_s, 0.0);
}

TEST(Interface, PureReflection) {
  const auto r = reduce_interface_coefficients(1.0, 1.0, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(r.zeta_t, 0.0);
  EXPECT_DOUBLE_EQ(r.zeta_s, 0.0);
  EXPECT_DOUBLE_EQ(r.eta_s, 1.0);
}

TEST(Interface, RejectsNamingCoefficient) {
  try {
    reduce_interface_coefficients(0.25, 1.0, 0.5, 1.0);
    FAIL();
  } catch (const InterfaceError& e) {
    EXPECT_EQ(e.coefficient(), "eta_s");
    EXPECT_DOUBLE_EQ(e.value(), -0.5);
  }
  EXPECT_THROW(reduce_interface_coefficients(1.5, 1.0, 0.5, 1.0), InterfaceError);
  EXPECT_THROW(reduce_interface_coefficients(0.5, 1.0, 0.5, 0.0), InterfaceError);
}

TEST(Interface, RandomTriplesSatisfyFluxIdentities) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u01(0.0, 1.0), uc(0.2, 3.0), unu(0.1, 3.0);
  int accepted = 0;
  for (int n = 0; n < 2000; ++n) {
    const double eta = u01(rng), c = uc(rng), nt = unu(rng), ns = unu(rng);
    try {
      const auto r = reduce_interface_coefficients(eta, nt, ns, c);
      ++accepted;
      EXPECT_NEAR(r.eta_t + c * r.zeta_t, 1.0, 1e-12);
      // zero net flux at each frequency for both incoming families
      EXPECT_NEAR(nt * (1.0 - r.eta_t) - ns * r.zeta_s, 0.0, 1e-12);
      EXPECT_NEAR(ns * (1.0 - r.eta_s) - nt * r.zeta_t, 0.0, 1e-12);
    } catch (const InterfaceError& e) {
      const double v = e.value();
      EXPECT_TRUE(v < 0.0 || v > 1.0) << e.coefficient() << " = " << v;
    }
  }
  EXPECT_GT(accepted, 100);
}
