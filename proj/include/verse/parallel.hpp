#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace verse {

// Runs fn(index, worker) over [begin, end) on `threads` workers pulling
// dynamic chunks. threads <= 1 runs inline in index order.
inline void parallel_for(std::uint64_t begin, std::uint64_t end, int threads,
                         const std::function<void(std::uint64_t, int)>& fn) {
  if (threads <= 1 || end - begin <= 1) {
    for (std::uint64_t i = begin; i < end; ++i) fn(i, 0);
    return;
  }
  const std::uint64_t chunk = std::max<std::uint64_t>(1, (end - begin) / (8 * threads));
  std::atomic<std::uint64_t> cursor{begin};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      while (true) {
        const std::uint64_t lo = cursor.fetch_add(chunk);
        if (lo >= end) break;
        const std::uint64_t hi = std::min(end, lo + chunk);
        for (std::uint64_t i = lo; i < hi; ++i) fn(i, t);
      }
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace verse
