#pragma once

#include <cstddef>

namespace tiltsense {

/// Execution policy for the data-parallel kernels.  Every kernel has a plain
/// serial loop and an OpenMP version of the same loop; both produce identical
/// bytes because each index writes only its own slot and reductions run in a
/// fixed index order afterwards.  `parallel` degrades to serial when the
/// library is built without OpenMP.
enum class Exec { serial, parallel };

/// Threads the parallel policy will use (1 without OpenMP).
int hardware_threads();

namespace detail {
void run_indexed(Exec exec, std::ptrdiff_t n, void (*body)(std::ptrdiff_t, void*), void* ctx);
}

/// Applies fn(i) for i in [0, n).  fn must only write state owned by index i.
template <class F>
void for_each_index(Exec exec, std::ptrdiff_t n, F&& fn) {
  detail::run_indexed(
      exec, n,
      [](std::ptrdiff_t i, void* ctx) { (*static_cast<F*>(ctx))(i); },
      &fn);
}

}  // namespace tiltsense
