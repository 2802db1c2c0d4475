#pragma once

#include <cstddef>
#include <functional>

namespace vpfp {

// Worker count: VPFP_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n) on a bounded pool; tasks must not share mutable state.
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vpfp
