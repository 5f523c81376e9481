#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wormszego {

// Worker cap: WORMSZEGO_THREADS if set and positive, otherwise hardware concurrency.
inline unsigned thread_cap()
{
  if (const char *env = std::getenv("WORMSZEGO_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count). Each index is independent; callers that
// reduce must store per-index partials and combine them in index order.
template<typename Body>
void parallel_for(std::size_t count, Body &&body)
{
  const std::size_t workers = std::min<std::size_t>(thread_cap(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_lock;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers)
          body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(failure_lock);
        if (!failure)
          failure = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace wormszego
