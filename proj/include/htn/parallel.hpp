#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace htn {

// Worker count for parallel sections: HTN_THREADS when set, otherwise the
// available hardware parallelism.
int worker_count();

// Runs body(0..count-1). workers <= 1 uses the plain serial loop, which is
// the reference execution the parallel path is tested against. Bodies must
// write to disjoint slots; outputs are then independent of scheduling.
template <typename F>
void parallel_for(std::size_t count, int workers, F&& body) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (long long i = 0; i < static_cast<long long>(count); ++i)
    body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

}  // namespace htn
