#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fbosc {

/// Worker count used when a caller passes 0. Set once by the CLI's --threads.
inline unsigned& default_thread_count() {
  static unsigned count = 0;
  return count;
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested == 0) requested = default_thread_count();
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// out[i] = fn(i) for i in [0, n), computed in contiguous chunks. Results are
/// ordered by index whatever the thread count; the first exception thrown by
/// any worker is rethrown on the calling thread.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned threads = 0) {
  std::vector<T> out(n);
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(n, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace fbosc
