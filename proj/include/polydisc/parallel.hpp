#pragma once

// Minimal deterministic fan-out helper. POLYDISC_THREADS caps the worker
// count; results are written into caller-owned slots so the reduction order
// never depends on scheduling.

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace polydisc {

inline unsigned thread_cap() {
  if (const char* env = std::getenv("POLYDISC_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

template <class F>
void parallel_for(size_t n, F&& body) {
  unsigned workers = std::min<size_t>(thread_cap(), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace polydisc
