#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace npr::par {

enum class Mode { Serial, OpenMP };

// Global execution mode. OpenMP kernels and the serial reference share one
// call site; tests flip this switch and compare results bit for bit.
inline Mode& mode() {
#ifdef _OPENMP
  static Mode m = Mode::OpenMP;
#else
  static Mode m = Mode::Serial;
#endif
  return m;
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline bool inside_parallel() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

// f(i) for i in [0, n). Iterations must be independent; each iteration is
// executed by exactly one thread, so results do not depend on the schedule.
template <class F>
void parallel_for(int n, F&& f) {
#ifdef _OPENMP
  if (mode() == Mode::OpenMP && !inside_parallel() && n > 1) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) f(i);
}

// Deterministic sum reduction: the index range is cut into fixed-size blocks,
// block partials are computed independently (possibly in parallel) and then
// combined in block order. The result is identical for any thread count.
template <class F>
double blocked_sum(std::int64_t n, std::int64_t block, F&& term) {
  if (n <= 0) return 0.0;
  if (block < 1) block = 1;
  const std::int64_t n_blocks = (n + block - 1) / block;
  std::vector<double> partial(static_cast<std::size_t>(n_blocks), 0.0);
  parallel_for(static_cast<int>(n_blocks), [&](int bi) {
    const std::int64_t lo = static_cast<std::int64_t>(bi) * block;
    const std::int64_t hi = lo + block < n ? lo + block : n;
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(bi)] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace npr::par
