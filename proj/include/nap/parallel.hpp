#pragma once

#include <cstddef>
#include <functional>

namespace nap {

// Thread budget for data-parallel loops. Reads NAP_THREADS once per process;
// 0 or unset means hardware concurrency.
std::size_t thread_budget();

// Runs fn over [0, n) split into contiguous chunks, one per worker. Chunk
// boundaries depend only on n and the worker count, and workers write
// disjoint ranges, so callers that fill per-index output slots get results
// independent of scheduling. Runs inline when n is small or one thread is
// available.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t begin, std::size_t end)>& fn);

}  // namespace nap
