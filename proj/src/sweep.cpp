#include "nhsense/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nhsense::sweep {

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                    const Options& opts) {
  if (opts.execution == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
  const long long n = static_cast<long long>(count);
  if (opts.threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(opts.threads)
    for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
  }
#else
  for (std::size_t i = 0; i < count; ++i) fn(i);
#endif
}

}  // namespace nhsense::sweep
