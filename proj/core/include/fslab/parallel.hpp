#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace fslab {

/// Worker cap: FSLAB_THREADS if set (>=1), otherwise hardware concurrency.
int worker_count();

/// Runs fn(chunk_index, begin, end) over [0, n) split into a fixed number of
/// chunks that does NOT depend on the worker count, so per-chunk partial
/// results (and hence any fixed-order reduction over chunks) are identical
/// regardless of FSLAB_THREADS.
void parallel_chunks(std::int64_t n,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn);

/// Number of chunks parallel_chunks uses for a given n.
int chunk_count(std::int64_t n);

} // namespace fslab
