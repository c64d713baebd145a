#pragma once

#include <cstddef>
#include <functional>

namespace qboost {

/// Worker count for internal parallelism: QBOOST_THREADS when set and
/// positive, otherwise the hardware concurrency.
std::size_t thread_budget();

/// Calls body(begin, end) over contiguous chunks of [0, n). Chunks never
/// overlap, so bodies writing only to their own indices give results
/// independent of the thread count.
void parallel_chunks(std::size_t n, std::size_t min_chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qboost
