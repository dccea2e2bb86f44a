#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace drc {

/// Worker count used by parallel_for: hardware concurrency, at least 1.
inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for i in [0, n) across worker threads. Work items must be
/// independent; results are written to caller-owned slots indexed by i, so
/// the outcome does not depend on scheduling. The first exception thrown by
/// any item is rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t n, Body&& body, unsigned workers = default_workers()) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace drc
