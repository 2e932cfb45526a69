#pragma once

#include <functional>
#include <vector>

namespace flowtop {

// Worker count resolution: an explicit override wins, then the
// FLOWTOP_THREADS environment variable, then the hardware default.
int worker_count(int override_threads = 0);

// Runs body(i) for i in [0, n) across workers. Output written by the bodies
// must go to disjoint slots; there is no implicit reduction here.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

// Deterministic blocked map-reduce: items are processed in fixed blocks of
// `block_size`, each block accumulates sequentially into its own Acc, and the
// caller merges the returned accumulators in block order. The final result is
// then independent of how many workers ran the blocks.
template <class Acc>
std::vector<Acc> parallel_blocks(long n, long block_size, int threads,
                                 const std::function<void(long, Acc&)>& item) {
  if (block_size < 1) block_size = 1;
  const long n_blocks = (n + block_size - 1) / block_size;
  std::vector<Acc> accs(static_cast<std::size_t>(n_blocks));
  parallel_for(n_blocks, threads, [&](long b) {
    const long lo = b * block_size;
    const long hi = std::min(n, lo + block_size);
    for (long i = lo; i < hi; ++i) item(i, accs[static_cast<std::size_t>(b)]);
  });
  return accs;
}

}  // namespace flowtop
