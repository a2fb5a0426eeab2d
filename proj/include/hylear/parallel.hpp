#ifndef HYLEAR_PARALLEL_HPP_
#define HYLEAR_PARALLEL_HPP_

#include <cstdint>

#include <omp.h>

namespace hylear {

// Runs fn(i) for i in [0, n). Iterations must be independent; any reduction
// happens after the loop in index order so results are identical for every
// thread count (including the serial path at threads <= 1).
template <typename Fn>
void parallel_for(int64_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int64_t i = 0; i < n; ++i) {
    fn(i);
  }
}

inline int hardware_threads() { return omp_get_max_threads(); }

}  // namespace hylear

#endif  // HYLEAR_PARALLEL_HPP_
