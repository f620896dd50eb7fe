#pragma once

#include <span>

namespace phonon {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  int n = 0;
};

/// Ordinary least squares y = slope x + intercept with Pearson correlation r.
/// Needs at least two distinct x values.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace phonon
