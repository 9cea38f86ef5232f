#pragma once

#include <algorithm>
#include <chrono>
#include <vector>

namespace hgemm {

/// Median wall time of `reps` runs after one discarded warm-up run.
template <class F>
double median_seconds(F&& run, std::size_t reps) {
  using clock = std::chrono::steady_clock;
  run();
  std::vector<double> t;
  t.reserve(std::max<std::size_t>(reps, 1));
  for (std::size_t r = 0; r < std::max<std::size_t>(reps, 1); ++r) {
    const auto start = clock::now();
    run();
    t.push_back(std::chrono::duration<double>(clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  const std::size_t mid = t.size() / 2;
  return t.size() % 2 == 1 ? t[mid] : 0.5 * (t[mid - 1] + t[mid]);
}

/// flops / seconds / 1e9
inline double gflops(double flops, double seconds) { return flops / seconds / 1e9; }

}  // namespace hgemm
