#pragma once

#include <string>

namespace phonon {

/// Smooth cutoff b(y) = exp(-1/(y(1-y))) on (0,1), scaled to unit integral.
double bump_density(double y);

/// Integral of bump_density over (0, y); 0 below the support, 1 above it.
double bump_cdf(double y);

/// A unit-mass density on the real line used to build sources and test
/// functions. Three shapes are supported:
///   bump   -- (1/width) * bump_density((y - origin)/width), support [origin, origin+width]
///   boxcar -- 1/(hi - lo) on [lo, hi)
///   delta  -- unit point mass at `origin`
class Profile {
 public:
  enum class Kind { bump, boxcar, delta };

  static Profile bump(double origin, double width);
  static Profile boxcar(double lo, double hi);
  static Profile delta(double at);

  Kind kind() const noexcept { return kind_; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

  /// Pointwise density. Throws std::logic_error for a delta.
  double density(double y) const;

  /// Mass carried in [a, b). A delta at y0 contributes 1 iff a <= y0 < b.
  double mass(double a, double b) const;

  /// mass(a, b) / (b - a).
  double average(double a, double b) const { return mass(a, b) / (b - a); }

  /// Supremum of the density (infinite for a delta).
  double peak() const;

  std::string describe() const;

 private:
  Profile(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

  Kind kind_;
  double lo_;
  double hi_;
};

}  // namespace phonon
