#pragma once

#include <cstddef>
#include <functional>

namespace phonon {

/// Runs task(i) for i in [0, n) on up to `jobs` threads. Tasks claim indices
/// from a shared counter and must write their results by index, so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// task is rethrown after all threads have joined.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

}  // namespace phonon
