#pragma once

#include <cstddef>
#include <functional>

namespace cavmet {

/// Runs fn(i) for every i in [0, n) on a small worker pool.
///
/// Each index is processed exactly once; callers store results into
/// per-index slots, so parallel and serial execution produce identical
/// output. The first exception thrown by any worker is rethrown on the
/// calling thread after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cavmet
