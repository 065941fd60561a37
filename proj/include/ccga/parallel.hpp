#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ccga {

/// Calls body(i) for i in [0, count) on up to `jobs` threads. Work items are
/// claimed dynamically, so callers must write results by index. The first
/// exception thrown by any body is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::int64_t count, int jobs, Body&& body) {
  const auto workers = static_cast<std::int64_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::int64_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::int64_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ccga
