#pragma once

#include "stoprule/types.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stoprule::detail {

/// Worker count: STOPRULE_THREADS when set (clamped to >= 1), otherwise the
/// hardware concurrency.
inline int thread_budget() {
  if (const char* env = std::getenv("STOPRULE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) with a static block partition.  Results
/// must be written to preallocated slots so output order never depends on
/// scheduling.  The first worker exception is rethrown after the join.
template <typename F>
void parallel_for_index(Index count, F&& fn) {
  const int workers = std::min<Index>(thread_budget(), count);
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const Index lo = count * w / workers, hi = count * (w + 1) / workers;
    pool.emplace_back([&fn, &errors, w, lo, hi] {
      try {
        for (Index i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace stoprule::detail
