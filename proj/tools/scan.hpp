#pragma once

// Scan-cell dispatch: cells run on a small worker pool, results are
// collected and emitted strictly in input order regardless of completion
// order, so scan output is deterministic for any thread count.

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pzcli {

// Applies fn to 0..count-1 with at most `threads` workers and returns the
// results indexed by cell.  fn must handle its own domain errors (returning
// an error-describing result); only unexpected exceptions propagate, after
// all workers have joined.
template <typename Result>
std::vector<Result> run_cells(std::size_t count, unsigned threads,
                              const std::function<Result(std::size_t)>& fn) {
  std::vector<Result> results(count);
  if (count == 0) return results;
  unsigned workers = threads == 0 ? 1u : threads;
  if (workers > count) workers = static_cast<unsigned>(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace pzcli
