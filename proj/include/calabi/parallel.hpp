#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace calabi {

inline int default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(i) for every i in [0, n) on up to `workers` threads. Callers write
/// into per-index slots and merge in index order, so results do not depend on
/// scheduling. The exception of the lowest failing index is rethrown.
template <typename Task>
void parallel_for(std::size_t n, int workers, Task&& task) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), n);
  if (threads <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(run);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace calabi
