#include "phonon/errors.hpp"
#include "phonon/measurement.hpp"
#include "phonon/worker_pool.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

using namespace phonon;

namespace {

std::vector<double> samples(double dt, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = i * dt;
  return t;
}

ResolvedTestFunction smooth_psi(double t1, double theta) {
  ResolvedTestFunction p;
  p.kind = TestFunctionSpec::Kind::smooth;
  p.t1 = t1;
  p.theta = theta;
  return p;
}

}  // namespace

TEST(Functional, SmoothWindowHasMassTheta) {
  const auto t = samples(1e-4, 40001);
  const std::vector<double> ones(t.size(), 1.0);
  for (double theta : {0.4, 0.1, 0.02}) {
    const auto psi = smooth_psi(2.0, theta);
    EXPECT_NEAR(measurement_functional(t, ones, psi) / theta, 1.0, 1e-6);
    // symmetric window: a linear trace reads its centre value
    EXPECT_NEAR(measurement_functional(t, t, psi) / theta, 2.0, 1e-6);
  }
}

TEST(Functional, PointEvaluationTiesToEarlierSample) {
  const auto t = samples(0.1, 11);
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  ResolvedTestFunction p;
  p.t1 = 0.34;
  EXPECT_EQ(measurement_functional(t, v, p), 3.0);
  p.t1 = 0.36;
  EXPECT_EQ(measurement_functional(t, v, p), 4.0);
  p.t1 = 0.25;
  EXPECT_EQ(measurement_functional(t, v, p), 2.0);
}

TEST(Functional, WindowOutsideTraceThrows) {
  const auto t = samples(0.1, 11);
  const std::vector<double> v(t.size(), 1.0);
  EXPECT_THROW(measurement_functional(t, v, smooth_psi(0.95, 0.1)), ConfigError);
  ResolvedTestFunction p;
  p.t1 = 1.5;
  EXPECT_THROW(measurement_functional(t, v, p), ConfigError);
}

TEST(Regression, ExactLine) {
  const std::vector<double> x{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> y;
  for (double v : x) y.push_back(-3.0 * v + 0.5);
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -3.0, 1e-12);
  EXPECT_NEAR(f.intercept, 0.5, 1e-12);
  EXPECT_NEAR(f.r, -1.0, 1e-12);
  EXPECT_EQ(f.n, 5);
}

TEST(Loss, ZeroAtTruthAndMeanSquare) {
  const FunctionalMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_EQ(loss(a, a), 0.0);
  const FunctionalMatrix b{{2.0, 2.0}, {3.0, 2.0}};
  EXPECT_NEAR(loss(a, b), (1.0 + 4.0) / 4.0, 1e-15);
}

TEST(Noise, DeterministicForSeed) {
  FunctionalMatrix a{{1.0, -2.0}, {0.5, 0.25}};
  auto b = a, c = a;
  add_noise(b, 0.01, 7);
  add_noise(c, 0.01, 7);
  EXPECT_EQ(b, c);
  EXPECT_NE(b, a);
  auto d = a;
  add_noise(d, 0.0, 7);
  EXPECT_EQ(d, a);
}

TEST(WorkerPool, ResultsByIndex) {
  std::vector<int> out(1000, -1);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i % 97); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i % 97));
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 5) throw SolverError("boom");
               }),
               SolverError);
}

TEST(Measure, IndependentOfJobCount) {
  ExperimentSetup s;
  SourceSpec proto;
  s.sources = sources_on_all_nodes(s.grid, proto);
  const auto g = make_grid(s, 1.0);
  const auto eta = ReflectionModel::tanh_param(1.5, 1.0);
  s.jobs = 1;
  const auto a = functionals_of(measure_all(eta, s, g));
  s.jobs = 4;
  const auto b = functionals_of(measure_all(eta, s, g));
  ASSERT_EQ(a.size(), 10u);
  EXPECT_EQ(a, b);
}

TEST(Sweep, IdenticalModelsAreFlagged) {
  ExperimentSetup s;
  s.sources = {SourceSpec{}};
  const auto eta = ReflectionModel::tanh_param(1.5, 1.0);
  const auto r = stability_sweep(eta, eta, {0.5, 1.0, 2.0}, s);
  EXPECT_TRUE(r.identical);
  EXPECT_FALSE(r.fit.has_value());
}
