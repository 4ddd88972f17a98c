#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hsl {

/// Process-wide worker cap for panel-parallel loops (default 1).
int worker_count();
void set_worker_count(int workers);

/// Sum of fn(0) + fn(1) + ... + fn(count-1). Units may be evaluated
/// concurrently but are always accumulated in index order, so the result is
/// bit-identical for every worker count.
template <class Fn>
double ordered_sum(std::size_t count, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, worker_count()));
  if (workers == 1 || count < 2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += fn(i);
    return acc;
  }
  std::vector<double> parts(count, 0.0);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) parts[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  double acc = 0.0;
  for (double p : parts) acc += p;
  return acc;
}

}  // namespace hsl
