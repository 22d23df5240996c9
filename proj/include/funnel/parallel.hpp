#pragma once

#include <cstddef>
#include <functional>

namespace funnel {

/// Worker count: FUNNEL_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(begin, end) on disjoint chunks covering [0, n). Chunks are
/// independent; results must not depend on which worker runs which chunk.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace funnel
