#pragma once

#include <cstddef>
#include <functional>

namespace tokeval {

// Thread count resolution: explicit request (> 0) wins, then the
// TOKEVAL_THREADS environment variable, then hardware concurrency.
// Always returns at least 1.
int resolve_thread_count(int requested = 0);

// Runs fn over [0, n) split into contiguous chunks, one per worker.
// Results must not depend on the split: callers merge per-chunk output
// in chunk order so any thread count produces identical results.
// threads <= 1 or tiny n runs inline on the calling thread.
void parallel_chunks(size_t n, int threads,
                     const std::function<void(size_t chunk, size_t begin, size_t end)>& fn);

// Number of chunks parallel_chunks will use for the given n and threads.
size_t chunk_count(size_t n, int threads);

}  // namespace tokeval
