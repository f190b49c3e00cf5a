#pragma once

#include <cstddef>
#include <functional>

namespace relspine {

/// Worker threads for parallel kernels: RELSPINE_WORKERS if set, else the OpenMP default.
int worker_count();

/// Runs body(i) for i in [0, n). With parallel = false the loop runs in index
/// order on the calling thread. The first exception thrown by any iteration is
/// rethrown after the loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, bool parallel = true);

}  // namespace relspine
