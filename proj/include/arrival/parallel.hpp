#pragma once

#include <cstddef>
#include <functional>

namespace arrival {

/// Worker count: ARRIVAL_THREADS if set and positive, otherwise the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on worker_count() threads in contiguous blocks.
/// The first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace arrival
