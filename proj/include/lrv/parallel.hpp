#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace lrv {

inline int default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(chunk_index) for chunk_index in [0, n_chunks). Work is handed out
// dynamically, but chunks write only chunk-indexed state, so results do not
// depend on the worker count.
template <class F>
void parallel_for_chunks(std::int64_t n_chunks, int workers, F&& f) {
  if (workers <= 1 || n_chunks <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) f(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= n_chunks) return;
      f(c);
    }
  };
  const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (int t = 0; t < n_threads - 1; ++t) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
}

}  // namespace lrv
