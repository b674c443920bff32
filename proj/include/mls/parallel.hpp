#pragma once

// Deterministic data parallelism: work is split into a fixed list of chunks
// that does not depend on the worker count, and results come back in chunk
// order. Workers only change wall time.

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mls {

template <typename Result, typename Fn>
std::vector<Result> parallel_chunks(std::size_t n_chunks, int workers, Fn&& fn) {
  std::vector<Result> results(n_chunks);
  if (workers <= 1 || n_chunks <= 1) {
    for (std::size_t i = 0; i < n_chunks; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_chunks) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), n_chunks);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace mls
