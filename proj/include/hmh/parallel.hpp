#pragma once

#include <cstddef>
#include <functional>

namespace hmh {

// Worker count: HMH_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, count) on a pool of workers. Callers write results
// into slot i, so any reduction afterwards happens in fixed index order.
// The first exception thrown by a body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hmh
