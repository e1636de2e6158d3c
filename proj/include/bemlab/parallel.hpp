#ifndef BEMLAB_PARALLEL_HPP_
#define BEMLAB_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <limits>

namespace bem {

// Execution policy for the data-parallel kernels. Every kernel has a
// serial reference path; the parallel path must write results by slot
// index only, so output is bitwise identical regardless of thread count.
enum class Exec { serial, parallel };

// Exceptions cannot cross an OpenMP region; the parallel path records the
// failure at the smallest index and rethrows it afterwards, matching what
// the serial loop would have thrown first.
template <class F>
void parallel_for(std::size_t count, Exec exec, F&& fn) {
  if (exec == Exec::parallel) {
    std::exception_ptr err = nullptr;
    std::size_t err_index = std::numeric_limits<std::size_t>::max();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(bemlab_parallel_for_err)
        {
          if (static_cast<std::size_t>(i) < err_index) {
            err_index = static_cast<std::size_t>(i);
            err = std::current_exception();
          }
        }
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::size_t i = 0; i < count; ++i) fn(i);
  }
}

}  // namespace bem

#endif  // BEMLAB_PARALLEL_HPP_
