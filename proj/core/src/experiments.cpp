#include "phonon/experiments.hpp"

#include "phonon/ballistic.hpp"
#include "phonon/errors.hpp"
#include "phonon/manifest.hpp"
#include "phonon/worker_pool.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace phonon {
namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

CsvTable eta_curves(const std::vector<std::pair<std::string, const ReflectionModel*>>& curves) {
  CsvTable t({"omega", "value", "curve"});
  for (const auto& [name, eta] : curves)
    for (int i = 0; i <= 195; ++i) {
      const double w = 0.05 + 0.01 * i;
      t.add_row({w, (*eta)(w), name});
    }
  return t;
}

struct Context {
  const RunConfig& cfg;
  const std::filesystem::path& out;
  std::ostream& log;
  RunManifest& manifest;
  ExperimentReport& report;

  void check(const std::string& name, bool ok, const std::string& detail) {
    report.checks.push_back({name, ok, detail});
    manifest.add_check(name, ok, detail);
    log << (ok ? "  ok    " : "  FAIL  ") << name << ": " << detail << "\n";
  }
  void emit(const CsvTable& t, const std::string& rel) {
    manifest.emit(t, out, rel);
    report.files.push_back(rel);
  }
  void emit_text(const std::string& s, const std::string& rel) {
    manifest.emit_text(s, out, rel);
    report.files.push_back(rel);
  }
};

json fit_json(const std::optional<LinearFit>& f) {
  if (!f) return {{"slope", nullptr}, {"intercept", nullptr}, {"r", nullptr}, {"n", 0}};
  return {{"slope", f->slope}, {"intercept", f->intercept}, {"r", f->r}, {"n", f->n}};
}

void run_solve(Context& c) {
  const RunConfig& cfg = c.cfg;
  const PhaseSpaceGrid grid = make_grid(cfg.setup, cfg.epsilon);
  c.manifest.add_grid(grid);
  SolverConfig s = cfg.setup.solver;
  s.epsilon = cfg.epsilon;
  s.eta = cfg.eta;
  s.source = cfg.source;
  const ResolvedSource src = resolve_source(s.source, grid);
  std::vector<ResolvedTestFunction> psi;
  double t_stop = 0.0;
  for (const auto& ts : cfg.setup.tests) {
    psi.push_back(resolve_test_function(ts, src, grid, cfg.setup.material));
    t_stop = std::max(t_stop, default_t_stop(psi.back(), src, cfg.setup.t_stop_margin));
  }
  s.t_stop = cfg.setup.t_stop.value_or(t_stop);
  c.log << "solve: eps = " << cfg.epsilon << ", nx = " << grid.nx() << ", dt = " << grid.dt()
        << ", t_stop = " << s.t_stop << "\n";

  KineticSolver solver(s, grid, cfg.setup.material);
  const SolveResult r = solver.solve();

  CsvTable trace({"t", "delta_T"});
  bool finite = true;
  for (std::size_t n = 0; n < r.t.size(); ++n) {
    trace.add_row({r.t[n], r.delta_t[n]});
    finite = finite && std::isfinite(r.delta_t[n]);
  }
  c.emit(trace, "surface_trace.csv");

  CsvTable fun({"test_index", "t1", "theta", "value"});
  const Trace tr{r.t, r.delta_t};
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const bool inside = psi[j].kind == TestFunctionSpec::Kind::grid_delta ? psi[j].t1 <= r.t.back()
                                                                          : psi[j].upper() <= r.t.back() + 1e-12;
    const double v = inside ? measurement_functional(tr, psi[j]) : std::numeric_limits<double>::quiet_NaN();
    fun.add_row({static_cast<long>(j), psi[j].t1, psi[j].theta, v});
  }
  c.emit(fun, "functionals.csv");

  if (!r.snapshots.empty()) {
    const NodalMaterial nodal = cfg.setup.material.sample(grid.omega());
    const std::size_t nch = static_cast<std::size_t>(grid.n_channels());
    CsvTable probes({"t", "x", "delta_T"});
    for (const auto& snap : r.snapshots)
      for (int i = 0; i < grid.nx(); ++i) {
        std::span<const double> slice(snap.values.data() + i * nch, nch);
        probes.add_row({snap.t, (i + 0.5) * grid.dx(), temperature_deviation(slice, nodal, grid, r.c_tau)});
      }
    c.emit(probes, "probes.csv");
  }
  c.emit(eta_curves({{"eta", &cfg.eta}}), "eta_curves.csv");

  c.check("trace_finite", finite, std::to_string(r.t.size()) + " samples");
  if (s.diagnostics) {
    const auto& d = r.diagnostics;
    c.check("conservation", d.max_conservation_ratio <= 1e-12,
            "max per-cell |<(Lf-f)/tau>| / <|f|/tau> = " + fmt(d.max_conservation_ratio) + " over " +
                std::to_string(d.steps_checked) + " steps");
    c.check("bounds", d.bounds_ok,
            "min f = " + fmt(d.min_value) + ", max f/C_omega = " + fmt(d.max_scaled_value) +
                ", c_m = " + fmt(d.c_m));
  }
}

void run_sweep(Context& c) {
  const RunConfig& cfg = c.cfg;
  const auto& ss = cfg.sweep;
  auto visit = [&](const PhaseSpaceGrid& grid, const std::vector<SourceRun>& runs) {
    c.manifest.add_grid(grid);
    c.log << "sweep: eps = " << grid.epsilon() << " done (" << runs.size() << " runs)\n";
    if (!ss.lambda_grid) return;
    const std::size_t ns = runs.size() / 2;
    CsvTable t({"omega_i", "t", "value", "run_id"});
    for (std::size_t i = 0; i < ns; ++i) {
      const auto& a = runs[i].trace;
      const auto& b = runs[ns + i].trace;
      for (std::size_t n = 0; n < a.t.size(); n += ss.lambda_stride) {
        t.add_row({runs[i].omega, a.t[n], a.value[n], std::string("eta1")});
        t.add_row({runs[i].omega, a.t[n], b.value[n], std::string("eta2")});
        t.add_row({runs[i].omega, a.t[n], a.value[n] - b.value[n], std::string("diff")});
      }
    }
    c.emit(t, epsilon_dir(grid.epsilon()) + "/lambda_grid.csv");
  };
  const SweepResult res = stability_sweep(cfg.eta, cfg.eta_alt, cfg.epsilons, cfg.setup, false, ss.norm, visit);

  CsvTable t({"epsilon", "inv_epsilon", "max_diff", "log_max_diff"});
  for (const auto& r : res.rows) t.add_row({r.epsilon, 1.0 / r.epsilon, r.max_diff, std::log(r.max_diff)});
  c.emit(t, "sweep.csv");
  json reg = fit_json(res.fit);
  reg["norm"] = ss.norm == SweepNorm::max ? "max" : "l1_time";
  reg["identical"] = res.identical;
  reg["monotone"] = res.monotone;
  c.emit_text(reg.dump(2) + "\n", "regression.json");
  c.emit(eta_curves({{"eta1", &cfg.eta}, {"eta2", &cfg.eta_alt}}), "eta_curves.csv");

  c.check("distinguishable", !res.identical,
          res.identical ? "every difference is zero; eta1 and eta2 agree on the grid" : "nonzero differences");
  if (res.fit)
    c.check("slope_negative", res.fit->slope < 0.0,
            "slope = " + fmt(res.fit->slope) + ", r = " + fmt(res.fit->r));
  c.log << "  info  monotone in epsilon: " << (res.monotone ? "yes" : "no") << "\n";
}

FunctionalMatrix truth_data(const RunConfig& cfg, const PhaseSpaceGrid& grid, std::size_t index) {
  FunctionalMatrix d = functionals_of(measure_all(cfg.eta, cfg.setup, grid));
  add_noise(d, cfg.noise.level, cfg.noise.seed + index);
  return d;
}

void run_landscape(Context& c) {
  const RunConfig& cfg = c.cfg;
  const auto& ls = cfg.landscape;
  CsvTable summary({"epsilon", "amplitude", "argmin_b"});
  std::vector<std::pair<double, double>> amp;
  for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
    const double eps = cfg.epsilons[e];
    const PhaseSpaceGrid grid = make_grid(cfg.setup, eps);
    c.manifest.add_grid(grid);
    const Landscape l = landscape_scan(ls.a, ls.b_min, ls.b_max, ls.n_points, grid, truth_data(cfg, grid, e), cfg.setup);
    CsvTable t({"b", "loss"});
    for (const auto& p : l.points) t.add_row({p.b, p.loss});
    c.emit(t, epsilon_dir(eps) + "/landscape.csv");
    summary.add_row({eps, l.amplitude(), l.argmin_b()});
    amp.emplace_back(eps, l.amplitude());
    c.log << "landscape: eps = " << eps << ", amplitude = " << l.amplitude() << ", argmin b = " << l.argmin_b()
          << "\n";
    if (cfg.eta.kind() == ReflectionModel::Kind::tanh_param && cfg.eta.a() == ls.a && cfg.noise.level == 0.0)
      c.check("argmin_eps_" + fmt(eps), std::abs(l.argmin_b() - cfg.eta.b()) <= ls.step() * (1 + 1e-9),
              "argmin b = " + fmt(l.argmin_b()) + ", truth b = " + fmt(cfg.eta.b()) + ", step = " + fmt(ls.step()));
  }
  c.emit(summary, "landscape_summary.csv");
  c.emit(eta_curves({{"eta", &cfg.eta}}), "eta_curves.csv");
  if (amp.size() >= 2) {
    std::sort(amp.begin(), amp.end());
    bool ok = true;
    std::string d;
    for (std::size_t i = 0; i < amp.size(); ++i) {
      if (i > 0 && !(amp[i].second > amp[i - 1].second)) ok = false;
      d += (i ? " < " : "") + fmt(amp[i].second);
    }
    c.check("flatter_as_epsilon_decreases", ok, "amplitudes by increasing epsilon: " + d);
  }
}

void run_reconstruct(Context& c) {
  const RunConfig& cfg = c.cfg;
  const auto& rc = cfg.reconstruct;
  CsvTable summary({"epsilon", "a", "b", "initial_loss", "final_loss", "loss_ratio", "iterations", "stop_reason"});
  std::vector<ReflectionModel> finals;
  for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
    const double eps = cfg.epsilons[e];
    const PhaseSpaceGrid grid = make_grid(cfg.setup, eps);
    c.manifest.add_grid(grid);
    const ReconstructResult r = reconstruct(rc.a0, rc.b0, truth_data(cfg, grid, e), eps, cfg.setup, rc.options);
    CsvTable t({"iter", "a", "b", "loss", "grad_norm"});
    for (const auto& s : r.trajectory) t.add_row({static_cast<long>(s.iter), s.a, s.b, s.loss, s.grad_norm});
    c.emit(t, epsilon_dir(eps) + "/recon_trace.csv");
    const auto& last = r.trajectory.back();
    const double ratio = r.initial_loss > 0.0 ? r.final_loss / r.initial_loss : 0.0;
    summary.add_row({eps, last.a, last.b, r.initial_loss, r.final_loss, ratio, static_cast<long>(last.iter),
                     r.stop_reason});
    finals.push_back(ReflectionModel::tanh_param(last.a, last.b));
    c.log << "reconstruct: eps = " << eps << ", (a, b) = (" << last.a << ", " << last.b << "), loss " << r.initial_loss
          << " -> " << r.final_loss << " [" << r.stop_reason << "]\n";
    c.check("no_divergence_eps_" + fmt(eps), r.stop_reason != "diverged" && r.final_loss <= r.initial_loss,
            "loss ratio = " + fmt(ratio) + ", stop = " + r.stop_reason);
  }
  c.emit(summary, "recon_summary.csv");
  const ReflectionModel start = ReflectionModel::tanh_param(rc.a0, rc.b0);
  std::vector<std::pair<std::string, const ReflectionModel*>> curves{{"truth", &cfg.eta}, {"initial", &start}};
  std::vector<std::string> names;
  for (double eps : cfg.epsilons) names.push_back("final_" + epsilon_dir(eps));
  for (std::size_t i = 0; i < finals.size(); ++i) curves.emplace_back(names[i], &finals[i]);
  c.emit(eta_curves(curves), "eta_curves.csv");
}

SourceSpec decompose_source(const RunConfig& cfg, double theta) {
  SourceSpec s = cfg.source;
  s.kind = SourceSpec::Kind::smooth;
  s.theta_t = theta;
  s.theta_mu = theta * cfg.decompose.theta_mu_ratio;
  s.theta_omega = theta * cfg.decompose.theta_omega_ratio;
  return s;
}

ResolvedTestFunction decompose_psi(double theta, const ResolvedSource& src, const PhaseSpaceGrid& grid,
                                   const MaterialModel& m) {
  TestFunctionSpec ts;
  ts.kind = TestFunctionSpec::Kind::smooth;
  ts.theta = theta;
  return resolve_test_function(ts, src, grid, m);
}

void run_decompose_split(Context& c) {
  const RunConfig& cfg = c.cfg;
  const double eps = cfg.epsilon;
  const PhaseSpaceGrid grid = make_grid(cfg.setup, eps);
  c.manifest.add_grid(grid);
  const auto& thetas = cfg.decompose.thetas;
  const ReflectionModel* etas[2] = {&cfg.eta, &cfg.eta_alt};

  // job q: theta index q / 4, eta (q / 2) % 2, scattering q % 2 (0 full, 1 collisionless)
  std::vector<double> value(thetas.size() * 4);
  std::vector<double> c_tau(thetas.size() * 4);
  parallel_for(value.size(), cfg.setup.jobs, [&](std::size_t q) {
    const double theta = thetas[q / 4];
    SolverConfig s = cfg.setup.solver;
    s.epsilon = eps;
    s.eta = *etas[(q / 2) % 2];
    s.source = decompose_source(cfg, theta);
    if (q % 2 == 1) s.scattering = Scattering::absorption_only;
    const ResolvedSource src = resolve_source(s.source, grid);
    const ResolvedTestFunction psi = decompose_psi(theta, src, grid, cfg.setup.material);
    s.t_stop = cfg.setup.t_stop.value_or(default_t_stop(psi, src, cfg.setup.t_stop_margin));
    KineticSolver solver(s, grid, cfg.setup.material);
    const SolveResult r = solver.solve();
    value[q] = measurement_functional(Trace{r.t, r.delta_t}, psi);
    c_tau[q] = r.c_tau;
  });

  CsvTable t({"epsilon", "theta", "M", "M0", "M1", "m0_asymptotic", "run_id", "M0_discrete", "M1_discrete"});
  bool identity = true;
  double worst_identity = 0.0;
  std::vector<std::vector<double>> m1_discrete(2);
  double dm0 = 0.0, dasym = 0.0, min_theta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double theta = thetas[i];
    const ResolvedSource src = resolve_source(decompose_source(cfg, theta), grid);
    const ResolvedTestFunction psi = decompose_psi(theta, src, grid, cfg.setup.material);
    double m0v[2], asym[2];
    for (int e = 0; e < 2; ++e) {
      const double m = value[4 * i + 2 * e];
      const double m0d = value[4 * i + 2 * e + 1];
      BallisticSpec b;
      b.eta = *etas[e];
      b.source = src;
      b.epsilon = eps;
      b.material = cfg.setup.material;
      b.x_max = grid.x_max();
      const double ct = c_tau[4 * i];
      const double m0 = ballistic_measurement(psi, b, ct);
      const double m1 = m - m0;
      asym[e] = m0_asymptotic(*etas[e], src, psi, cfg.setup.material, eps, grid.x_max(), ct);
      m0v[e] = m0;
      const double gap = std::abs(m - (m0 + m1));
      worst_identity = std::max(worst_identity, gap);
      if (gap > 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(m), std::abs(m0))) identity = false;
      t.add_row({eps, theta, m, m0, m1, asym[e], std::string(e == 0 ? "eta1" : "eta2"), m0d, m - m0d});
      m1_discrete[e].push_back(std::abs(m - m0d));
    }
    c.log << "decompose: theta = " << theta << ", M0 diff = " << std::abs(m0v[0] - m0v[1])
          << ", asymptotic diff = " << std::abs(asym[0] - asym[1]) << "\n";
    if (theta < min_theta) {
      min_theta = theta;
      dm0 = std::abs(m0v[0] - m0v[1]);
      dasym = std::abs(asym[0] - asym[1]);
    }
  }
  c.emit(t, "split.csv");
  c.emit(eta_curves({{"eta1", &cfg.eta}, {"eta2", &cfg.eta_alt}}), "eta_curves.csv");

  c.check("identity", identity, "max |M - (M0 + M1)| = " + fmt(worst_identity));
  if (thetas.size() >= 2) {
    std::vector<std::size_t> order(thetas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return thetas[a] > thetas[b]; });
    for (int e = 0; e < 2; ++e) {
      bool ok = true;
      std::string d;
      for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && !(m1_discrete[e][order[k]] < m1_discrete[e][order[k - 1]])) ok = false;
        d += (k ? " > " : "") + fmt(m1_discrete[e][order[k]]);
      }
      c.check(std::string("m1_shrinks_") + (e == 0 ? "eta1" : "eta2"), ok, "|M1| by decreasing theta: " + d);
    }
  }
  c.manifest.add_info("m0_difference_smallest_theta", fmt(dm0));
  c.manifest.add_info("m0_asymptotic_difference", fmt(dasym));
  c.log << "  info  |M0(eta1) - M0(eta2)| = " << dm0 << " vs asymptotic " << dasym << " (relative gap "
        << (dasym > 0 ? std::abs(dm0 / dasym - 1) : 0.0) << ")\n";
}

void run_decompose_scaling(Context& c) {
  const RunConfig& cfg = c.cfg;
  CsvTable t({"epsilon", "inv_epsilon", "theta", "M0_eta1", "M0_eta2", "m0_diff", "log_m0_diff",
              "m0_asymptotic_diff"});
  json fits = json::array();
  for (double theta : cfg.decompose.thetas) {
    std::vector<double> x, y;
    double predicted = 0.0;
    for (double eps : cfg.epsilons) {
      const PhaseSpaceGrid grid = make_grid(cfg.setup, eps);
      c.manifest.add_grid(grid);
      const ResolvedSource src = resolve_source(decompose_source(cfg, theta), grid);
      const ResolvedTestFunction psi = decompose_psi(theta, src, grid, cfg.setup.material);
      const double ct = compute_c_tau(cfg.setup.material.sample(grid.omega()), grid);
      double m0[2], asym[2];
      const ReflectionModel* etas[2] = {&cfg.eta, &cfg.eta_alt};
      for (int e = 0; e < 2; ++e) {
        BallisticSpec b;
        b.eta = *etas[e];
        b.source = src;
        b.epsilon = eps;
        b.material = cfg.setup.material;
        b.x_max = grid.x_max();
        m0[e] = ballistic_measurement(psi, b, ct);
        asym[e] = m0_asymptotic(*etas[e], src, psi, cfg.setup.material, eps, grid.x_max(), ct);
      }
      const double d = std::abs(m0[0] - m0[1]);
      t.add_row({eps, 1.0 / eps, theta, m0[0], m0[1], d, std::log(d), std::abs(asym[0] - asym[1])});
      x.push_back(1.0 / eps);
      y.push_back(std::log(d));
      const auto& mat = cfg.setup.material;
      predicted = -2.0 * grid.x_max() / (src.mu_eff * mat.nu(src.omega_eff) * mat.tau(src.omega_eff));
    }
    std::optional<LinearFit> f;
    if (x.size() >= 2) f = fit_line(x, y);
    json j = fit_json(f);
    j["theta"] = theta;
    j["predicted_slope"] = predicted;
    fits.push_back(j);
    if (f) {
      c.log << "decompose scaling: theta = " << theta << ", slope = " << f->slope << " (predicted " << predicted
            << "), r = " << f->r << "\n";
      c.check("m0_decays_theta_" + fmt(theta), f->slope < 0.0,
              "slope = " + fmt(f->slope) + ", predicted = " + fmt(predicted));
    }
  }
  c.emit(t, "m0_scaling.csv");
  c.emit_text(fits.dump(2) + "\n", "m0_regression.json");
  c.emit(eta_curves({{"eta1", &cfg.eta}, {"eta2", &cfg.eta_alt}}), "eta_curves.csv");
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::solve;
  if (name == "landscape") return Command::landscape;
  if (name == "sweep") return Command::sweep;
  if (name == "decompose") return Command::decompose;
  if (name == "reconstruct") return Command::reconstruct;
  throw ConfigError("unknown command \"" + name + "\"");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::landscape: return "landscape";
    case Command::sweep: return "sweep";
    case Command::decompose: return "decompose";
    case Command::reconstruct: return "reconstruct";
  }
  return "?";
}

bool ExperimentReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

std::string epsilon_dir(double epsilon) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "eps_%g", epsilon);
  return buf;
}

ExperimentReport run_experiment(Command command, const RunConfig& config, const std::filesystem::path& out_dir,
                                std::ostream& log) {
  std::filesystem::create_directories(out_dir);
  RunManifest manifest(command_name(command), config.resolved_json);
  ExperimentReport report;
  Context ctx{config, out_dir, log, manifest, report};
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    switch (command) {
      case Command::solve: run_solve(ctx); break;
      case Command::sweep: run_sweep(ctx); break;
      case Command::landscape: run_landscape(ctx); break;
      case Command::reconstruct: run_reconstruct(ctx); break;
      case Command::decompose:
        if (config.decompose.mode == DecomposeSettings::Mode::split)
          run_decompose_split(ctx);
        else
          run_decompose_scaling(ctx);
        break;
    }
  } catch (const std::exception& e) {
    manifest.set_wall_time(elapsed());
    manifest.set_status("error", e.what());
    manifest.write(out_dir);
    throw;
  }
  report.wall_time = elapsed();
  manifest.set_wall_time(report.wall_time);
  manifest.set_status(report.ok() ? "ok" : "checks_failed");
  manifest.write(out_dir);
  return report;
}

}  // namespace phonon
