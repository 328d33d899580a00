#pragma once

#include <cstddef>
#include <functional>

namespace laggraph {

/// Worker count: LAGGRAPH_THREADS when set to a positive integer, otherwise
/// the number of hardware threads (at least 1).
unsigned worker_count();

/// Runs fn(i) for every i in [0, n), split into contiguous chunks over up to
/// `workers` threads (0 = worker_count()). fn must only write to slots owned
/// by index i. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers = 0);

}  // namespace laggraph
