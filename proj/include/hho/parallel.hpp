#pragma once

#include <cstddef>
#include <functional>

namespace hho {

/// Worker count, capped by the HHO_THREADS environment variable when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
/// write results into per-index slots so output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace hho
