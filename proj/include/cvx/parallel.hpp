#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace cvx {

// Splits [begin, end) into one contiguous range per worker and folds the
// per-worker results in worker order, so the aggregate is independent of
// scheduling. `stop` is advisory: workers may use it to cut the search
// short once a global answer is known, which can change *which* witness a
// parallel run reports but never whether one exists.
//
// ChunkFn: Acc(std::uint64_t lo, std::uint64_t hi, std::atomic<bool>& stop)
// MergeFn: void(Acc& into, Acc&& part)
template <class Acc, class ChunkFn, class MergeFn>
Acc parallel_ranges(std::uint64_t begin, std::uint64_t end, int jobs, ChunkFn chunk_fn, Acc init,
                    MergeFn merge) {
  if (jobs < 1) jobs = 1;
  std::uint64_t total = end > begin ? end - begin : 0;
  if (jobs == 1 || total < 2) {
    std::atomic<bool> stop{false};
    Acc part = chunk_fn(begin, end, stop);
    merge(init, std::move(part));
    return init;
  }
  if (static_cast<std::uint64_t>(jobs) > total) jobs = static_cast<int>(total);

  std::atomic<bool> stop{false};
  std::vector<Acc> results(jobs, init);
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    std::uint64_t lo = begin + total * w / jobs;
    std::uint64_t hi = begin + total * (w + 1) / jobs;
    workers.emplace_back([&, w, lo, hi] {
      try {
        results[w] = chunk_fn(lo, hi, stop);
      } catch (...) {
        errors[w] = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& r : results) merge(init, std::move(r));
  return init;
}

}  // namespace cvx
