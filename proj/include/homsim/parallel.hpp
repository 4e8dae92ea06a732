#pragma once

#include <cstddef>
#include <functional>

namespace homsim::parallel {

// Number of worker threads: min(HOMSIM_THREADS, hardware threads),
// at least 1. HOMSIM_THREADS=1 forces sequential execution.
std::size_t thread_count();

// Runs fn(begin, end) over a partition of [0, n). Each index is
// processed exactly once by exactly one thread; callers must only
// write to disjoint, index-owned slots so that results are identical
// for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace homsim::parallel
