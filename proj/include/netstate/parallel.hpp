#pragma once

#include <cstddef>
#include <functional>

namespace netstate {

// Process-wide worker count used by the parallel stages. Values < 1 are
// clamped to 1. Results never depend on this number: every parallel loop
// writes disjoint outputs and reductions happen afterwards in index order.
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one
// per worker. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace netstate
