#include "phonon/measurement.hpp"

#include "phonon/errors.hpp"
#include "phonon/worker_pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace phonon {

double measurement_functional(std::span<const double> t, std::span<const double> value,
                              const ResolvedTestFunction& psi) {
  if (t.size() != value.size() || t.empty())
    throw ConfigError("measurement_functional: empty or ragged trace");
  const double t_end = t.back();
  const double dt = t.size() > 1 ? t[1] - t[0] : 0.0;
  auto escape = [&] {
    std::ostringstream os;
    os << "test window escapes the trace: t1 = " << psi.t1 << ", theta = " << psi.theta
       << ", t_stop = " << t_end;
    return ConfigError(os.str());
  };

  if (psi.kind == TestFunctionSpec::Kind::grid_delta) {
    if (dt <= 0.0) return psi.t1 == t.front() ? value.front() : throw escape();
    const double x = (psi.t1 - t.front()) / dt;
    const long n = static_cast<long>(std::ceil(x - 0.5 - 1e-9));
    if (n < 0 || n >= static_cast<long>(t.size())) throw escape();
    return value[n];
  }

  const double slack = 1e-9 * std::max(1.0, t_end);
  if (psi.lower() < t.front() - slack || psi.upper() > t_end + slack) throw escape();
  double sum = 0.0;
  for (std::size_t n = 0; n + 1 < t.size(); ++n) {
    const double a = t[n], b = t[n + 1];
    if (b <= psi.lower() || a >= psi.upper()) continue;
    sum += 0.5 * (b - a) * (psi(a) * value[n] + psi(b) * value[n + 1]);
  }
  return sum;
}

PhaseSpaceGrid make_grid(const ExperimentSetup& setup, double epsilon) {
  std::vector<double> nodes(setup.grid.n_omega);
  for (int k = 0; k < setup.grid.n_omega; ++k) nodes[k] = setup.grid.omega_min + k * setup.grid.d_omega;
  setup.material.validate(nodes);
  return PhaseSpaceGrid(setup.grid, epsilon, setup.material.nu_max_on(nodes));
}

std::vector<SourceSpec> sources_on_all_nodes(const GridSpec& grid, SourceSpec proto) {
  std::vector<SourceSpec> out;
  for (int k = 0; k < grid.n_omega; ++k) {
    proto.omega0 = grid.omega_min + k * grid.d_omega;
    out.push_back(proto);
  }
  return out;
}

SourceRun measurement_operator(const ReflectionModel& eta, std::size_t source_index,
                               const ExperimentSetup& setup, const PhaseSpaceGrid& grid) {
  if (source_index >= setup.sources.size()) throw ConfigError("source index out of range");
  SolverConfig cfg = setup.solver;
  cfg.epsilon = grid.epsilon();
  cfg.eta = eta;
  cfg.source = setup.sources[source_index];

  const ResolvedSource src = resolve_source(cfg.source, grid);
  SourceRun run;
  run.omega = src.omega_eff;
  double t_stop = 0.0;
  for (const auto& ts : setup.tests) {
    run.psi.push_back(resolve_test_function(ts, src, grid, setup.material));
    t_stop = std::max(t_stop, default_t_stop(run.psi.back(), src, setup.t_stop_margin));
  }
  cfg.t_stop = setup.t_stop.value_or(t_stop);
  run.t_stop = cfg.t_stop;

  KineticSolver solver(cfg, grid, setup.material);
  SolveResult res = solver.solve();
  run.trace.t = std::move(res.t);
  run.trace.value = std::move(res.delta_t);
  run.diagnostics = res.diagnostics;
  for (const auto& psi : run.psi) run.functionals.push_back(measurement_functional(run.trace, psi));
  return run;
}

std::vector<SourceRun> measure_all(const ReflectionModel& eta, const ExperimentSetup& setup,
                                   const PhaseSpaceGrid& grid) {
  std::vector<SourceRun> runs(setup.sources.size());
  parallel_for(runs.size(), setup.jobs,
               [&](std::size_t i) { runs[i] = measurement_operator(eta, i, setup, grid); });
  return runs;
}

FunctionalMatrix functionals_of(const std::vector<SourceRun>& runs) {
  FunctionalMatrix m;
  m.reserve(runs.size());
  for (const auto& r : runs) m.push_back(r.functionals);
  return m;
}

double loss(const FunctionalMatrix& model, const FunctionalMatrix& data) {
  if (model.size() != data.size()) throw ConfigError("loss: data has the wrong number of sources");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (model[i].size() != data[i].size())
      throw ConfigError("loss: data has the wrong number of test functions for source " +
                        std::to_string(i));
    for (std::size_t j = 0; j < model[i].size(); ++j) {
      const double d = model[i][j] - data[i][j];
      sum += d * d;
      ++count;
    }
  }
  if (count == 0) throw ConfigError("loss: empty data");
  return sum / static_cast<double>(count);
}

double loss(const ReflectionModel& eta, const FunctionalMatrix& data, const ExperimentSetup& setup,
            const PhaseSpaceGrid& grid) {
  return loss(functionals_of(measure_all(eta, setup, grid)), data);
}

double Landscape::amplitude() const {
  if (points.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                      [](const auto& p, const auto& q) { return p.loss < q.loss; });
  return hi->loss - lo->loss;
}

double Landscape::argmin_b() const {
  auto it = std::min_element(points.begin(), points.end(),
                             [](const auto& p, const auto& q) { return p.loss < q.loss; });
  return it == points.end() ? std::numeric_limits<double>::quiet_NaN() : it->b;
}

Landscape landscape_scan(double a_fixed, double b_lo, double b_hi, int n_points, double epsilon,
                         const ReflectionModel& truth, const ExperimentSetup& setup) {
  const PhaseSpaceGrid grid = make_grid(setup, epsilon);
  return landscape_scan(a_fixed, b_lo, b_hi, n_points, grid,
                        functionals_of(measure_all(truth, setup, grid)), setup);
}

Landscape landscape_scan(double a_fixed, double b_lo, double b_hi, int n_points,
                         const PhaseSpaceGrid& grid, const FunctionalMatrix& data,
                         const ExperimentSetup& setup) {
  if (n_points < 2 || !(b_hi > b_lo)) throw ConfigError("landscape: need n_points >= 2 and b_max > b_min");
  Landscape out;
  out.epsilon = grid.epsilon();
  out.a = a_fixed;
  out.points.resize(n_points);
  const std::size_t ns = setup.sources.size();
  // flatten (scan point, source) into one job list
  std::vector<std::vector<double>> fun(static_cast<std::size_t>(n_points) * ns);
  parallel_for(fun.size(), setup.jobs, [&](std::size_t q) {
    const std::size_t p = q / ns;
    const std::size_t i = q % ns;
    const double b = b_lo + (b_hi - b_lo) * static_cast<double>(p) / (n_points - 1);
    fun[q] = measurement_operator(ReflectionModel::tanh_param(a_fixed, b), i, setup, grid).functionals;
  });
  for (int p = 0; p < n_points; ++p) {
    FunctionalMatrix m(fun.begin() + static_cast<long>(p * ns), fun.begin() + static_cast<long>((p + 1) * ns));
    out.points[p].b = b_lo + (b_hi - b_lo) * static_cast<double>(p) / (n_points - 1);
    out.points[p].loss = loss(m, data);
  }
  return out;
}

SweepResult stability_sweep(const ReflectionModel& eta1, const ReflectionModel& eta2,
                            const std::vector<double>& epsilons, const ExperimentSetup& setup,
                            bool keep_traces, SweepNorm norm, const SweepVisitor& visit) {
  if (epsilons.size() < 3) throw ConfigError("sweep: need at least three epsilon values");
  SweepResult out;
  bool all_zero = true;
  for (double eps : epsilons) {
    const PhaseSpaceGrid grid = make_grid(setup, eps);
    const std::size_t ns = setup.sources.size();
    std::vector<SourceRun> runs(2 * ns);
    parallel_for(runs.size(), setup.jobs, [&](std::size_t q) {
      runs[q] = measurement_operator(q < ns ? eta1 : eta2, q % ns, setup, grid);
    });
    SweepRow row;
    row.epsilon = eps;
    for (std::size_t i = 0; i < ns; ++i) {
      const auto& v1 = runs[i].trace.value;
      const auto& v2 = runs[ns + i].trace.value;
      const auto& t = runs[i].trace.t;
      if (norm == SweepNorm::max) {
        for (std::size_t n = 0; n < v1.size(); ++n) row.max_diff = std::max(row.max_diff, std::abs(v1[n] - v2[n]));
      } else {
        double s = 0.0;
        for (std::size_t n = 0; n + 1 < v1.size(); ++n)
          s += 0.5 * (t[n + 1] - t[n]) * (std::abs(v1[n] - v2[n]) + std::abs(v1[n + 1] - v2[n + 1]));
        row.max_diff = std::max(row.max_diff, s);
      }
    }
    if (row.max_diff > 0.0) all_zero = false;
    if (row.max_diff <= 0.0) {
      row.max_diff = std::numeric_limits<double>::epsilon();
      row.floored = true;
    }
    if (visit) visit(grid, runs);
    if (keep_traces) {
      row.runs1.assign(runs.begin(), runs.begin() + static_cast<long>(ns));
      row.runs2.assign(runs.begin() + static_cast<long>(ns), runs.end());
    }
    out.rows.push_back(std::move(row));
  }
  out.identical = all_zero;
  if (!all_zero) {
    std::vector<double> x, y;
    for (const auto& r : out.rows) {
      x.push_back(1.0 / r.epsilon);
      y.push_back(std::log(r.max_diff));
    }
    out.fit = fit_line(x, y);
  }
  std::vector<const SweepRow*> sorted;
  for (const auto& r : out.rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* p, auto* q) { return p->epsilon < q->epsilon; });
  out.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->max_diff < sorted[i - 1]->max_diff) out.monotone = false;
  return out;
}

void add_noise(FunctionalMatrix& data, double level, std::uint64_t seed) {
  if (level < 0.0) throw ConfigError("noise.level must be >= 0");
  if (level == 0.0) return;
  double scale = 0.0;
  for (const auto& row : data)
    for (double v : row) scale = std::max(scale, std::abs(v));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, level * scale);
  for (auto& row : data)
    for (double& v : row) v += n(rng);
}

ReconstructResult reconstruct(double a0, double b0, const FunctionalMatrix& data, double epsilon,
                              const ExperimentSetup& setup, const ReconstructOptions& opts) {
  const PhaseSpaceGrid grid = make_grid(setup, epsilon);
  auto L = [&](double a, double b) { return loss(ReflectionModel::tanh_param(a, b), data, setup, grid); };

  ReconstructResult out;
  double a = a0, b = b0;
  double f = L(a, b);
  out.initial_loss = f;
  int increases = 0;
  for (int it = 0;; ++it) {
    const double ha = opts.fd_relative_step * std::max(std::abs(a), 1e-8);
    const double hb = opts.fd_relative_step * std::max(std::abs(b), 1e-8);
    double ga = 0.0, gb = 0.0;
    if (f > opts.loss_tol) {
      ga = (L(a + ha, b) - L(a - ha, b)) / (2.0 * ha);
      gb = (L(a, b + hb) - L(a, b - hb)) / (2.0 * hb);
    }
    const double gn = std::hypot(ga, gb);
    out.trajectory.push_back({it, a, b, f, gn});
    if (f <= opts.loss_tol) {
      out.stop_reason = "loss_tol";
      break;
    }
    if (gn < opts.grad_tol) {
      out.stop_reason = "grad_tol";
      break;
    }
    if (it >= opts.max_iter) {
      out.stop_reason = "max_iter";
      break;
    }
    double sa = -opts.learning_rate * ga;
    double sb = -opts.learning_rate * gb;
    const double sn = std::hypot(sa, sb);
    if (opts.max_step > 0.0 && sn > opts.max_step) {
      sa *= opts.max_step / sn;
      sb *= opts.max_step / sn;
    }
    a += sa;
    b += sb;
    const double f_new = L(a, b);
    increases = f_new > f ? increases + 1 : 0;
    f = f_new;
    if (increases >= opts.divergence_window) {
      out.trajectory.push_back({it + 1, a, b, f, std::numeric_limits<double>::quiet_NaN()});
      out.stop_reason = "diverged";
      break;
    }
  }
  out.final_loss = out.trajectory.back().loss;
  return out;
}

}  // namespace phonon
