#ifndef MC_PARALLEL_HPP
#define MC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace mc {

namespace detail {
inline std::atomic<unsigned>& jobs_setting() {
  static std::atomic<unsigned> jobs{0};
  return jobs;
}
}  // namespace detail

/// Number of workers used by the max-reduce scans. 0 means "use hardware
/// concurrency". Results never depend on this value.
inline void set_jobs(unsigned jobs) { detail::jobs_setting().store(jobs); }

inline unsigned jobs() {
  const unsigned j = detail::jobs_setting().load();
  if (j != 0) return j;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates body(i) for i in [0, n) and returns the maximum (or `init` when
/// n == 0). Work is split into contiguous chunks, one per worker. Since max is
/// associative and commutative the result is bitwise independent of the split.
template <class Body>
double parallel_max(std::size_t n, Body&& body, double init = 0.0) {
  const std::size_t workers =
      std::min<std::size_t>(jobs(), std::max<std::size_t>(1, n / 64));
  if (workers <= 1) {
    double best = init;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, static_cast<double>(body(i)));
    return best;
  }
  std::vector<double> partial(workers, init);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      double best = init;
      for (std::size_t i = lo; i < hi; ++i) best = std::max(best, static_cast<double>(body(i)));
      partial[w] = best;
    });
  }
  for (auto& t : pool) t.join();
  return *std::max_element(partial.begin(), partial.end());
}

/// Runs body(i) for every i in [0, n) across the worker pool. `body` must only
/// write to slots owned by index i.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(jobs(), std::max<std::size_t>(1, n / 16));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mc

#endif  // MC_PARALLEL_HPP
