#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qpad {

/// Worker count resolution: explicit request, else QPAD_THREADS, else
/// hardware concurrency.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QPAD_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static block partition. fn(i) must write only to slot i, which keeps the
// combined result independent of the worker count.
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int workers, Fn&& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  workers = static_cast<int>(std::min<std::int64_t>(std::max(workers, 1), count));
  if (workers == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = begin + w * chunk;
    const std::int64_t hi = std::min(lo + chunk, end);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qpad
