#include "tiltsense/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tiltsense {

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {

void run_indexed(Exec exec, std::ptrdiff_t n, void (*body)(std::ptrdiff_t, void*), void* ctx) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i, ctx);
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i, ctx);
}

}  // namespace detail
}  // namespace tiltsense
