#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace lpwave {

/// Worker-thread cap: the LPW_THREADS environment variable when set (>= 1),
/// otherwise the hardware concurrency.
inline int max_threads() {
  if (const char* env = std::getenv("LPW_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? static_cast<int>(hw) : 1;
}

/// Runs fn(0..njobs-1) on up to nthreads workers. Jobs must write disjoint
/// state (e.g. preassigned result slots); completion order is unspecified but
/// the slot assignment makes results deterministic.
inline void run_jobs(int njobs, int nthreads, const std::function<void(int)>& fn) {
  if (njobs <= 0) return;
  if (nthreads <= 1 || njobs == 1) {
    for (int k = 0; k < njobs; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(nthreads, njobs);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < njobs; k = next.fetch_add(1)) fn(k);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lpwave
