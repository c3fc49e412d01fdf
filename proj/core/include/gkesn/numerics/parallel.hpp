#pragma once

#include <cstddef>
#include <functional>

namespace gkesn::numerics {

/// Number of worker threads to use when the caller requested `requested`;
/// zero or negative means "use the hardware concurrency".
int resolve_threads(int requested);

/// Run fn(i) for i in [0, n) on up to `threads` workers.
///
/// Each worker owns a contiguous index range, so the partition depends only
/// on n and the thread count. Callers must write only to per-index outputs;
/// under that contract results are bitwise identical for every thread count,
/// because no floating-point reduction happens across workers here —
/// combining partial results in a fixed order is the caller's job.
///
/// The first exception thrown by the lowest-indexed worker is rethrown in
/// the calling thread after all workers have joined.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace gkesn::numerics
