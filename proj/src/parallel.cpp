#include "sgrasp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace sgrasp {

namespace {
std::atomic<int> g_threads{0};
}

int defaultThreads() {
  const int t = g_threads.load();
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void setDefaultThreads(int threads) { g_threads.store(std::max(0, threads)); }

void parallelFor(int n, const std::function<void(int)>& body, int threads) {
  if (n <= 0) return;
  if (threads <= 0) threads = defaultThreads();
  threads = std::min(threads, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const int begin = static_cast<int>(static_cast<long>(n) * t / threads);
    const int end = static_cast<int>(static_cast<long>(n) * (t + 1) / threads);
    pool.emplace_back([&, begin, end] {
      for (int i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sgrasp
