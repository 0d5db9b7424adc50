#pragma once

#include <cstddef>
#include <functional>

namespace holonomy {

/// Worker count: HOLONOMY_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is handled exactly once; callers write results into slot i so the
/// outcome does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace holonomy
