#pragma once
// Minimal worker pool for embarrassingly parallel index-range work. Shards
// are pulled from an atomic counter; results are merged by the caller, so
// output is deterministic regardless of scheduling.

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qhvar {

inline unsigned default_workers() {
  if (const char* env = std::getenv("QHVAR_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(shard_index) for every shard in [0, n_shards) on `workers` threads.
// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_shards(std::uint64_t n_shards, unsigned workers, Fn&& fn) {
  if (n_shards == 0) return;
  if (workers <= 1 || n_shards == 1) {
    for (std::uint64_t s = 0; s < n_shards; ++s) fn(s);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      std::uint64_t s = next.fetch_add(1, std::memory_order_relaxed);
      if (s >= n_shards) return;
      try {
        fn(s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned n = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_shards));
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace qhvar
