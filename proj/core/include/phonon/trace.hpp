#pragma once

#include "phonon/source.hpp"

#include <span>
#include <vector>

namespace phonon {

/// Surface temperature series Delta T(t_n, x = 0), t_n = n dt.
struct Trace {
  std::vector<double> t;
  std::vector<double> value;
};

/// Time projection  int psi(t) Delta T(t) dt  over the trace.
///
/// Smooth psi: trapezoid rule over the samples; the window [t1 - theta, t1 + theta]
/// must lie inside the trace. grid_delta psi: the sample nearest t1 (ties to the
/// earlier sample). Throws ConfigError when the window escapes the trace.
double measurement_functional(std::span<const double> t, std::span<const double> value,
                              const ResolvedTestFunction& psi);

inline double measurement_functional(const Trace& trace, const ResolvedTestFunction& psi) {
  return measurement_functional(trace.t, trace.value, psi);
}

}  // namespace phonon
