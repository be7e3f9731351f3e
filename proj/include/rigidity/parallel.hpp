#pragma once

// Chunked parallel loop over grid indices. Results must be merged in chunk
// order by the caller so scans stay independent of the partitioning. The
// RIGIDITY_THREADS environment variable caps the worker count.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rigidity {

inline int thread_budget() {
  const char* env = std::getenv("RIGIDITY_THREADS");
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (env != nullptr) {
    const int requested = std::atoi(env);
    if (requested >= 1) return std::min(requested, hw);
  }
  return std::min(hw, 8);
}

// fn(chunk_index, begin, end) runs on [begin, end); chunks are contiguous and
// ordered, so per-chunk outputs can be merged deterministically.
inline void parallel_chunks(std::size_t count,
                            const std::function<void(int, std::size_t, std::size_t)>& fn) {
  const int workers = std::max(1, std::min<std::size_t>(thread_budget(), count) > 0
                                      ? static_cast<int>(std::min<std::size_t>(thread_budget(), count))
                                      : 1);
  if (workers == 1 || count < 2) {
    fn(0, 0, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, w, begin, end);
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace rigidity
