#include "phonon/ballistic.hpp"

#include "phonon/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

namespace phonon {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 64>;

template <class F>
double integrate_profile(const Profile& p, F&& f) {
  if (p.kind() == Profile::Kind::delta) return f(p.lower());
  return Gauss::integrate([&](double y) { return p.density(y) * f(y); }, p.lower(), p.upper());
}

/// Unit-support shape of a profile: density(lo + y w) w on [0, 1].
double unit_shape(const Profile& p, double y) {
  const double w = p.upper() - p.lower();
  return p.density(p.lower() + y * w) * w;
}

/// int psi(t) phi_t(t - s) dt
double time_overlap(const ResolvedTestFunction& psi, const Profile& time, double s) {
  if (psi.kind == TestFunctionSpec::Kind::grid_delta) {
    if (time.kind() == Profile::Kind::delta) return psi.t1 == time.lower() + s ? 1.0 : 0.0;
    return time.density(psi.t1 - s);
  }
  if (time.kind() == Profile::Kind::delta) return psi(time.lower() + s);
  const double lo = std::max(psi.lower(), time.lower() + s);
  const double hi = std::min(psi.upper(), time.upper() + s);
  if (!(hi > lo)) return 0.0;
  return Gauss::integrate([&](double t) { return psi(t) * time.density(t - s); }, lo, hi);
}

}  // namespace

double ballistic_value(double t, double x, double mu, double omega, const BallisticSpec& spec) {
  const auto& src = spec.source;
  if (src.mu.kind() == Profile::Kind::delta || src.omega.kind() == Profile::Kind::delta)
    throw ConfigError("ballistic_value needs a source with pointwise densities");
  const double nu = spec.material.nu(omega);
  const double tau = spec.material.tau(omega);
  const double eps = spec.epsilon;
  const double amu = std::abs(mu);
  const double path = mu > 0.0 ? x : 2.0 * spec.x_max - x;
  const double arrival = eps * path / (amu * nu);
  if (t <= arrival) return 0.0;
  const double phi = src.spec.amplitude * src.time.density(t - arrival) * src.mu.density(amu) *
                     src.omega.density(omega);
  const double refl = mu > 0.0 ? 1.0 : spec.eta(omega);
  return refl * phi * std::exp(-path / (amu * nu * tau * eps));
}

double ballistic_channel_value(double t, double x, int j, int k, const PhaseSpaceGrid& grid,
                               const NodalMaterial& material, const std::vector<double>& eta_nodes,
                               const BallisticSpec& spec, double dt) {
  const double mu = grid.mu()[j];
  const double amu = std::abs(mu);
  const double nu = material.nu[k];
  const double tau = material.tau[k];
  const double eps = spec.epsilon;
  const bool forward = mu > 0.0;
  const double path = forward ? x : 2.0 * spec.x_max - x;
  const double arrival = eps * path / (amu * nu);
  const double weight = spec.source.channel_weight[grid.channel(forward ? j : grid.mirror(j), k)];
  if (weight == 0.0) return 0.0;
  const double tr = t - arrival;
  const double tf = dt > 0.0 ? spec.source.time.average(tr, tr + dt)
                             : (tr > 0.0 ? spec.source.time.density(tr) : 0.0);
  if (tf == 0.0) return 0.0;
  const double refl = forward ? 1.0 : eta_nodes[k];
  return refl * weight * tf * std::exp(-path / (amu * nu * tau * eps));
}

std::vector<double> ballistic_field(double t, const PhaseSpaceGrid& grid, const BallisticSpec& spec,
                                    double dt) {
  const NodalMaterial m = spec.material.sample(grid.omega());
  const std::vector<double> eta = spec.eta.sample(grid.omega());
  const int nch = grid.n_channels();
  std::vector<double> out(static_cast<std::size_t>(grid.nx()) * nch, 0.0);
  for (int i = 0; i < grid.nx(); ++i)
    for (int k = 0; k < grid.n_omega(); ++k)
      for (int j = 0; j < grid.n_mu(); ++j)
        out[static_cast<std::size_t>(i) * nch + grid.channel(j, k)] =
            ballistic_channel_value(t, grid.x_center(i), j, k, grid, m, eta, spec, dt);
  return out;
}

Trace ballistic_surface_trace(std::span<const double> times, const PhaseSpaceGrid& grid,
                              const BallisticSpec& spec) {
  const NodalMaterial m = spec.material.sample(grid.omega());
  const std::vector<double> eta = spec.eta.sample(grid.omega());
  const double c_tau = compute_c_tau(m, grid);
  Trace tr;
  tr.t.assign(times.begin(), times.end());
  tr.value.reserve(times.size());
  for (double t : times) {
    double rho = 0.0;
    for (int k = 0; k < grid.n_omega(); ++k)
      for (int j = 0; j < grid.n_mu(); ++j) {
        const double v = ballistic_channel_value(t, 0.0, j, k, grid, m, eta, spec, grid.dt());
        if (v != 0.0) rho += grid.mu_weights()[j] * grid.omega_weights()[k] * v / m.tau[k];
      }
    tr.value.push_back(rho / c_tau);
  }
  return tr;
}

double ballistic_measurement(const ResolvedTestFunction& psi, const BallisticSpec& spec, double c_tau) {
  const auto& src = spec.source;
  const auto& mat = spec.material;
  const double eps = spec.epsilon;
  const double xm = spec.x_max;

  const double j_in = time_overlap(psi, src.time, 0.0);
  double inflow = 0.0;
  if (j_in != 0.0) {
    inflow = integrate_profile(src.omega, [&](double w) { return 1.0 / mat.tau(w); }) * j_in;
  }
  const double reflected = integrate_profile(src.mu, [&](double mu) {
    return integrate_profile(src.omega, [&](double w) {
      const double nu = mat.nu(w);
      const double tau = mat.tau(w);
      const double s = 2.0 * eps * xm / (mu * nu);
      const double ov = time_overlap(psi, src.time, s);
      if (ov == 0.0) return 0.0;
      return spec.eta(w) / tau * std::exp(-2.0 * xm / (mu * nu * tau * eps)) * ov;
    });
  });
  return src.spec.amplitude * (inflow + reflected) / c_tau;
}

MeasurementSplit measurement_split(const Trace& full_run, const PhaseSpaceGrid& grid,
                                   const BallisticSpec& spec, const ResolvedTestFunction& psi) {
  if (std::abs(spec.epsilon - grid.epsilon()) > 1e-12 * grid.epsilon() ||
      std::abs(spec.x_max - grid.x_max()) > 1e-12 * grid.x_max())
    throw ConfigError("measurement_split: ballistic spec and run grid disagree on epsilon or x_max");
  if (full_run.t.size() >= 2 && std::abs((full_run.t[1] - full_run.t[0]) - grid.dt()) > 1e-9 * grid.dt())
    throw ConfigError("measurement_split: trace time step does not match the grid");
  MeasurementSplit out;
  out.m = measurement_functional(full_run, psi);
  const Trace t0 = ballistic_surface_trace(full_run.t, grid, spec);
  out.m0 = measurement_functional(t0, psi);
  out.m1 = out.m - out.m0;
  return out;
}

double AsymptoticTerms::difference(double eta1, double eta2) const {
  return c1 * std::abs(eta1 - eta2) * decay;
}

AsymptoticTerms m0_asymptotic_terms(const ResolvedSource& source, const ResolvedTestFunction& psi,
                                    const MaterialModel& material, double epsilon, double x_max,
                                    double c_tau) {
  if (source.spec.kind != SourceSpec::Kind::smooth || psi.kind != TestFunctionSpec::Kind::smooth)
    throw ConfigError("m0_asymptotic needs a smooth source and a smooth test function");
  const auto& s = source.spec;
  const double th = psi.theta;
  const double mu0 = s.mu0;
  const double w0 = s.omega0;
  const double nu0 = material.nu(w0);
  const double tau0 = material.tau(w0);
  const double dnu0 = material.nu_derivative(w0);
  const double base = 2.0 * epsilon * x_max / (mu0 * nu0);
  const double lin = 2.0 * epsilon * x_max / ((mu0 * nu0) * (mu0 * nu0));
  const double r_mu = s.theta_mu / th;
  const double r_om = s.theta_omega / th;

  auto unit = [](const Profile& p) { return [&p](double y) { return unit_shape(p, y); }; };
  const auto bt = unit(source.time);
  const auto bm = unit(source.mu);
  const auto bw = unit(source.omega);

  AsymptoticTerms a;
  a.c1 = s.amplitude / (tau0 * c_tau) * Gauss::integrate([&](double mp) {
           return bm(mp) * Gauss::integrate([&](double wp) {
                    return bw(wp) * Gauss::integrate([&](double tp) {
                             const double tt = (s.t0 + s.theta_t * tp + base - psi.t1) / th -
                                               lin * (r_mu * mp * nu0 + r_om * wp * mu0 * dnu0);
                             return bt(tp) * centered_bump(tt);
                           }, 0.0, 1.0);
                  }, 0.0, 1.0);
         }, 0.0, 1.0);
  a.c4 = s.amplitude / c_tau * Gauss::integrate([&](double wp) {
           const double tau = material.tau(w0 + s.theta_omega * wp);
           return bw(wp) / tau * Gauss::integrate([&](double tp) {
                    return bt(tp) * centered_bump((s.t0 + s.theta_t * tp - psi.t1) / th);
                  }, 0.0, 1.0);
         }, 0.0, 1.0);
  a.decay = std::exp(-2.0 * x_max / (mu0 * nu0 * tau0 * epsilon));
  return a;
}

double m0_asymptotic(const ReflectionModel& eta, const ResolvedSource& source,
                     const ResolvedTestFunction& psi, const MaterialModel& material, double epsilon,
                     double x_max, double c_tau) {
  return m0_asymptotic_terms(source, psi, material, epsilon, x_max, c_tau).value(eta(source.spec.omega0));
}

}  // namespace phonon
