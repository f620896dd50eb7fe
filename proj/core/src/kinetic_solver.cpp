#include "phonon/kinetic_solver.hpp"

#include "phonon/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phonon {
namespace {

long step_count_for(double t_stop, double dt) {
  return static_cast<long>(std::ceil(t_stop / dt - 1e-9));
}

}  // namespace

KineticSolver::KineticSolver(SolverConfig config, const PhaseSpaceGrid& grid,
                             const MaterialModel& material)
    : cfg_(std::move(config)), grid_(grid) {
  if (std::abs(cfg_.epsilon - grid.epsilon()) > 1e-12 * grid.epsilon())
    throw ConfigError("solver: epsilon does not match the grid it was built for");
  if (!(cfg_.t_stop > 0.0)) throw ConfigError("solver: t_stop must be positive");

  mat_ = material.sample(grid.omega());
  c_tau_ = compute_c_tau(mat_, grid);
  src_ = resolve_source(cfg_.source, grid);
  eta_ = cfg_.eta.sample(grid.omega());

  const int nom = grid.n_omega();
  iface_.resize(nom);
  if (cfg_.coupling == CouplingMode::coupled) {
    const MaterialModel sub = material.scaled(cfg_.substrate.nu_factor, cfg_.substrate.tau_factor);
    sub_mat_ = sub.sample(grid.omega());
    for (int k = 0; k < nom; ++k)
      iface_[k] = reduce_interface_coefficients(eta_[k], mat_.nu[k], sub_mat_.nu[k], cfg_.interface_c);
  } else {
    for (int k = 0; k < nom; ++k) iface_[k].eta_t = eta_[k];
  }

  fm_ = build_medium(mat_, grid.nx());
  const int nch = grid.n_channels();
  f_ = DistributionField(grid.nx(), nch);
  f_next_ = DistributionField(grid.nx(), nch);
  if (cfg_.coupling == CouplingMode::coupled) {
    if (!(cfg_.substrate.length_factor > 0.0))
      throw ConfigError("substrate.length_factor must be positive");
    const int nxs = static_cast<int>(std::ceil(cfg_.substrate.length_factor * grid.nx() - 1e-9));
    gm_ = build_medium(sub_mat_, nxs);
    g_ = DistributionField(nxs, nch);
    g_next_ = DistributionField(nxs, nch);
  }

  if (cfg_.equilibrium_level) {
    for (int i = 0; i < grid.nx(); ++i)
      for (int k = 0; k < nom; ++k)
        for (int j = 0; j < grid.n_mu(); ++j)
          f_.cell(i, grid.channel(j, k)) = *cfg_.equilibrium_level * mat_.c_omega[k];
  }

  n_steps_ = step_count_for(cfg_.t_stop, grid.dt());

  // largest inflow relative to C_omega over the whole run
  double peak_time = 0.0;
  const double dt = grid.dt();
  const long n_lo = std::max(0L, static_cast<long>(std::floor(src_.time.lower() / dt)) - 1);
  const long n_hi = std::min(n_steps_, static_cast<long>(std::ceil(src_.time.upper() / dt)) + 1);
  for (long n = n_lo; n <= n_hi; ++n) peak_time = std::max(peak_time, src_.time_factor(n * dt, dt));
  double peak_ch = 0.0;
  for (int k = 0; k < nom; ++k)
    for (int j = grid.half_mu(); j < grid.n_mu(); ++j)
      peak_ch = std::max(peak_ch, src_.channel_weight[grid.channel(j, k)] / mat_.c_omega[k]);
  diag_.c_m = peak_ch * peak_time + cfg_.equilibrium_level.value_or(0.0);
}

KineticSolver::Medium KineticSolver::build_medium(const NodalMaterial& m, int nx) const {
  const auto& g = grid_;
  Medium md;
  md.nx = nx;
  const int nch = g.n_channels();
  md.cfl.resize(nch);
  md.wt.resize(nch);
  md.lcoef.resize(nch);
  md.rate.resize(nch);
  md.c_tau = compute_c_tau(m, g);
  const double eps = g.epsilon();
  double max_cfl = 0.0;
  double max_rate = 0.0;
  for (int k = 0; k < g.n_omega(); ++k) {
    for (int j = 0; j < g.n_mu(); ++j) {
      const int ch = g.channel(j, k);
      md.cfl[ch] = g.dt() * std::abs(g.mu()[j]) * m.nu[k] / (eps * g.dx());
      md.wt[ch] = g.mu_weights()[j] * g.omega_weights()[k] / m.tau[k];
      md.lcoef[ch] = m.c_omega[k] / md.c_tau;
      md.rate[ch] = g.dt() / (eps * eps * m.tau[k]);
      max_cfl = std::max(max_cfl, md.cfl[ch]);
      max_rate = std::max(max_rate, md.rate[ch]);
    }
  }
  if (max_cfl > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "CFL violation: dt max|mu nu| / (eps dx) = " << max_cfl << " > 1 (dt = " << g.dt()
       << ", dx = " << g.dx() << ", eps = " << eps << ")";
    throw SolverError(os.str());
  }
  if (cfg_.collision == CollisionMode::explicit_euler && cfg_.scattering != Scattering::none &&
      max_rate > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "explicit relaxation unstable: dt / (eps^2 tau_min) = " << max_rate
       << " > 1; use collision_mode = semi_implicit or a smaller dt";
    throw ConfigError(os.str());
  }
  return md;
}

void KineticSolver::apply_boundaries(long n) {
  const auto& g = grid_;
  const int nmu = g.n_mu();
  const int h = g.half_mu();
  const double tf = src_.time_factor(n * g.dt(), g.dt());
  const double level = cfg_.equilibrium_level.value_or(0.0);
  const bool coupled = cfg_.coupling == CouplingMode::coupled;

  double* in = f_.row(0);
  const double* last = f_.row(g.nx());
  double* out = f_.row(g.nx() + 1);
  for (int k = 0; k < g.n_omega(); ++k) {
    const int base = k * nmu;
    const auto& ic = iface_[k];
    for (int j = h; j < nmu; ++j) in[base + j] = src_.channel_weight[base + j] * tf + level * mat_.c_omega[k];
    for (int j = 0; j < h; ++j) in[base + j] = 0.0;
    for (int j = 0; j < h; ++j) out[base + j] = ic.eta_t * last[base + nmu - 1 - j];
    for (int j = h; j < nmu; ++j) out[base + j] = 0.0;
    if (coupled) {
      const double* g_first = g_.row(1);
      double* g_in = g_.row(0);
      for (int j = 0; j < h; ++j) out[base + j] += ic.zeta_t * g_first[base + j];
      for (int j = h; j < nmu; ++j)
        g_in[base + j] = ic.eta_s * g_first[base + nmu - 1 - j] + ic.zeta_s * last[base + j];
      for (int j = 0; j < h; ++j) g_in[base + j] = 0.0;
    }
  }
  if (coupled) {
    double* g_out = g_.row(g_.nx() + 1);
    std::fill(g_out, g_out + g.n_channels(), 0.0);
  }
  f_.t = n * g.dt();
}

double KineticSolver::surface_temperature() const {
  const auto& g = grid_;
  const int nmu = g.n_mu();
  const int h = g.half_mu();
  const double* in = f_.row(0);
  const double* first = f_.row(1);
  double rho = 0.0;
  for (int k = 0; k < g.n_omega(); ++k) {
    const int base = k * nmu;
    for (int j = 0; j < h; ++j) rho += fm_.wt[base + j] * first[base + j];
    for (int j = h; j < nmu; ++j) rho += fm_.wt[base + j] * in[base + j];
  }
  return rho / c_tau_;
}

void KineticSolver::advance(const Medium& md, const DistributionField& cur, DistributionField& nxt,
                            long n, bool check) {
  const int nmu = grid_.n_mu();
  const int h = grid_.half_mu();
  const int nom = grid_.n_omega();
  const int nch = grid_.n_channels();
  const double* cfl = md.cfl.data();
  const double* wt = md.wt.data();
  const double* lc = md.lcoef.data();
  const double* rate = md.rate.data();
  const Scattering sc = cfg_.scattering;
  const bool implicit = cfg_.collision == CollisionMode::semi_implicit;

  for (int i = 1; i <= md.nx; ++i) {
    const double* __restrict up = cur.row(i - 1);
    const double* __restrict c = cur.row(i);
    const double* __restrict dn = cur.row(i + 1);
    double* __restrict o = nxt.row(i);

    for (int k = 0; k < nom; ++k) {
      const int b = k * nmu;
      for (int j = b; j < b + h; ++j) o[j] = c[j] - cfl[j] * (c[j] - dn[j]);
      for (int j = b + h; j < b + nmu; ++j) o[j] = c[j] - cfl[j] * (c[j] - up[j]);
    }

    double rho = 0.0;
    for (int ch = 0; ch < nch; ++ch) rho += wt[ch] * o[ch];
    if (!std::isfinite(rho)) report_non_finite(nxt, n + 1, &md == &fm_ ? "f" : "g");

    if (check && sc == Scattering::bgk) {
      double res = 0.0, norm = 0.0;
      for (int ch = 0; ch < nch; ++ch) {
        res += wt[ch] * (lc[ch] * rho - o[ch]);
        norm += wt[ch] * std::abs(o[ch]);
      }
      if (norm > 0.0) diag_.max_conservation_ratio = std::max(diag_.max_conservation_ratio, std::abs(res) / norm);
    }

    switch (sc) {
      case Scattering::bgk:
        if (implicit) {
          for (int ch = 0; ch < nch; ++ch) o[ch] = (o[ch] + rate[ch] * lc[ch] * rho) / (1.0 + rate[ch]);
        } else {
          for (int ch = 0; ch < nch; ++ch) o[ch] += rate[ch] * (lc[ch] * rho - o[ch]);
        }
        break;
      case Scattering::absorption_only:
        if (implicit) {
          for (int ch = 0; ch < nch; ++ch) o[ch] /= (1.0 + rate[ch]);
        } else {
          for (int ch = 0; ch < nch; ++ch) o[ch] *= (1.0 - rate[ch]);
        }
        break;
      case Scattering::none:
        break;
    }
  }
}

void KineticSolver::report_non_finite(const DistributionField& fld, long n, const char* which) const {
  const auto& g = grid_;
  for (int i = 0; i < fld.nx(); ++i)
    for (int k = 0; k < g.n_omega(); ++k)
      for (int j = 0; j < g.n_mu(); ++j) {
        const double v = fld.cell(i, g.channel(j, k));
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "non-finite value in " << which << " at step " << n << " (t = " << n * g.dt()
             << "): x cell " << i << ", mu[" << j << "] = " << g.mu()[j] << ", omega[" << k
             << "] = " << g.omega()[k];
          throw SolverError(os.str());
        }
      }
  std::ostringstream os;
  os << "non-finite moment in " << which << " at step " << n << " (t = " << n * g.dt() << ")";
  throw SolverError(os.str());
}

void KineticSolver::step(long n) {
  const bool check = cfg_.diagnostics;
  advance(fm_, f_, f_next_, n, check);
  std::swap(f_, f_next_);
  if (cfg_.coupling == CouplingMode::coupled) {
    advance(gm_, g_, g_next_, n, check);
    std::swap(g_, g_next_);
  }
  f_.t = (n + 1) * grid_.dt();

  if (check) {
    ++diag_.steps_checked;
    const auto& g = grid_;
    const double tol = 1e-12 * std::max(diag_.c_m, 1.0);
    auto scan = [&](const DistributionField& fld, const NodalMaterial& m) {
      for (int i = 0; i < fld.nx(); ++i) {
        const double* r = fld.row(i + 1);
        for (int k = 0; k < g.n_omega(); ++k) {
          const double inv_c = 1.0 / m.c_omega[k];
          for (int j = 0; j < g.n_mu(); ++j) {
            const double v = r[k * g.n_mu() + j];
            diag_.min_value = std::min(diag_.min_value, v);
            diag_.max_scaled_value = std::max(diag_.max_scaled_value, v * inv_c);
          }
        }
      }
    };
    scan(f_, mat_);
    if (cfg_.coupling == CouplingMode::coupled) scan(g_, sub_mat_);
    if (diag_.min_value < -tol || diag_.max_scaled_value > diag_.c_m + tol) diag_.bounds_ok = false;
  }
}

SolveResult KineticSolver::solve() {
  SolveResult res;
  const double dt = grid_.dt();
  res.t.reserve(n_steps_ + 1);
  res.delta_t.reserve(n_steps_ + 1);

  std::vector<long> snap_steps;
  for (double ts : cfg_.snapshot_times) {
    if (ts < 0.0) throw ConfigError("snapshot time must be nonnegative");
    snap_steps.push_back(std::min(n_steps_, std::lround(ts / dt)));
  }

  for (long n = 0;; ++n) {
    apply_boundaries(n);
    res.t.push_back(n * dt);
    res.delta_t.push_back(surface_temperature());
    for (std::size_t s = 0; s < snap_steps.size(); ++s)
      if (snap_steps[s] == n) res.snapshots.push_back({n * dt, static_cast<int>(n), f_.interior()});
    if (n == n_steps_) break;
    step(n);
  }
  res.steps = n_steps_;
  res.c_tau = c_tau_;
  res.diagnostics = diag_;
  return res;
}

}  // namespace phonon
