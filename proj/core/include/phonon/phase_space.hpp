#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phonon {

/// Resolution recipe for a family of grids parametrized by epsilon.
///
///   dx = min(dx_cap, epsilon / dx_ratio), rounded down so that x_max/dx is integral
///   dt = min(cfl * epsilon * dx / nu_max, epsilon^2)   (second term only if eps2_cap)
///
/// With nu_max = 2 and cfl = 1 the time step is min(epsilon*dx/2, epsilon^2).
struct GridSpec {
  std::string name = "custom";
  double x_max = 0.5;
  double dx_cap = 0.004;
  double dx_ratio = 125.0;
  int n_mu = 200;
  double omega_min = 0.05;
  double d_omega = 0.05;
  int n_omega = 40;
  double cfl = 1.0;
  bool eps2_cap = true;
  std::optional<double> dt_override;

  /// 40 frequencies on [0.05, 2], 200 ordinates, dx = min(0.004, eps/125), x in [0, 0.5].
  static GridSpec full();
  /// 10 frequencies on [0.2, 2], 40 ordinates, dx = min(0.01, eps/25), x in [0, 0.5].
  static GridSpec desk();
};

/// Discretization of (x, mu, omega, t) for one epsilon.
///
/// Ordinates are cell centres +-(k - 1/2) dmu with uniform weights, sorted
/// ascending so that indices [0, n_mu/2) carry mu < 0 and index j mirrors to
/// n_mu - 1 - j. Frequencies are omega_min + i*d_omega with rectangle weights.
/// Phase-space channels are numbered  channel(j, k) = k * n_mu + j.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(const GridSpec& spec, double epsilon, double nu_max);

  double epsilon() const noexcept { return epsilon_; }
  double x_max() const noexcept { return x_max_; }
  int nx() const noexcept { return nx_; }
  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }
  double nu_max() const noexcept { return nu_max_; }
  const GridSpec& spec() const noexcept { return spec_; }

  int n_mu() const noexcept { return static_cast<int>(mu_.size()); }
  int n_omega() const noexcept { return static_cast<int>(omega_.size()); }
  int n_channels() const noexcept { return n_mu() * n_omega(); }
  int half_mu() const noexcept { return n_mu() / 2; }

  double d_mu() const noexcept { return 2.0 / n_mu(); }
  double d_omega() const noexcept { return spec_.d_omega; }

  std::span<const double> mu() const noexcept { return mu_; }
  std::span<const double> mu_weights() const noexcept { return mu_w_; }
  std::span<const double> omega() const noexcept { return omega_; }
  std::span<const double> omega_weights() const noexcept { return omega_w_; }

  int channel(int j, int k) const noexcept { return k * n_mu() + j; }
  int mirror(int j) const noexcept { return n_mu() - 1 - j; }

  /// Cell [lo, hi) owned by ordinate j / frequency k.
  std::pair<double, double> mu_cell(int j) const noexcept;
  std::pair<double, double> omega_cell(int k) const noexcept;

  double x_center(int i) const noexcept { return (i + 0.5) * dx_; }

  /// Nearest ordinate to mu; ties resolve to the smaller ordinate.
  int nearest_mu(double mu) const;
  /// Nearest frequency node; ties resolve to the lower node.
  int nearest_omega(double omega) const;

  /// Canonical text that identifies the discretization (hashed into manifests).
  std::string fingerprint() const;

 private:
  GridSpec spec_;
  double epsilon_;
  double nu_max_;
  double x_max_;
  int nx_;
  double dx_;
  double dt_;
  std::vector<double> mu_, mu_w_, omega_, omega_w_;
};

/// Grid reproducing the full resolution for the nu = omega material (nu_max = 2).
PhaseSpaceGrid build_full_grid(double epsilon);

/// Sum over (mu, omega) nodes of w_mu * w_omega * weight(j, k) * value(channel(j, k)).
double moment(std::span<const double> values, const PhaseSpaceGrid& grid,
              const std::function<double(int j, int k)>& weight);

/// Same reduction with a precomputed per-channel weight (already including w_mu w_omega).
double moment(std::span<const double> values, std::span<const double> channel_weight);

/// Deviational energy density on (x, mu, omega) at one time level.
///
/// Storage is row-major in x with one ghost row on each side:
/// row 0 holds the left boundary data, rows 1..nx the cells, row nx+1 the
/// right boundary data; each row has n_channels entries.
class DistributionField {
 public:
  DistributionField() = default;
  DistributionField(int nx, int n_channels);

  int nx() const noexcept { return nx_; }
  int n_channels() const noexcept { return nch_; }

  double* row(int r) noexcept { return data_.data() + static_cast<std::size_t>(r) * nch_; }
  const double* row(int r) const noexcept {
    return data_.data() + static_cast<std::size_t>(r) * nch_;
  }

  /// Interior cell i in [0, nx).
  double& cell(int i, int ch) noexcept { return row(i + 1)[ch]; }
  double cell(int i, int ch) const noexcept { return row(i + 1)[ch]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  /// Copy of the interior rows (ghosts dropped), laid out [i][channel].
  std::vector<double> interior() const;

  void fill(double v);

  double t = 0.0;

 private:
  int nx_ = 0;
  int nch_ = 0;
  std::vector<double> data_;
};

}  // namespace phonon
