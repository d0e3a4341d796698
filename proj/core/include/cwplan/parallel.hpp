#pragma once

#include <cstddef>
#include <functional>

namespace cwplan {

/// Worker count: CWPLAN_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_budget();

/// Run body(0) .. body(n-1) across the thread budget. Indices are handed
/// out dynamically; bodies must only touch disjoint state per index. Runs
/// inline when the budget is 1. The first exception thrown by a body is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace cwplan
