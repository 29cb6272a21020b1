#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace onebit {

/// Thread count from ONEBIT_THREADS, else the hardware concurrency.
inline int default_threads() {
  if (const char* env = std::getenv("ONEBIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls fn(i) for i in [0, n) on `threads` workers. Work is claimed through an atomic
/// counter; callers write into pre-sized slots, so results never depend on scheduling.
/// `reverse` only changes the claim order (used to check order independence).
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn, bool reverse = false) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(reverse ? n - 1 - k : k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        fn(reverse ? n - 1 - k : k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(threads) < n ? static_cast<std::size_t>(threads) : n;
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace onebit
