#pragma once

#include <cstddef>
#include <vector>

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace contract_lab {

/// Serial keeps the reference single-thread path; Parallel fans cells out
/// across OpenMP workers. Both produce identical output in identical order.
enum class ExecutionMode { Serial, Parallel };

/// Worker count: CONTRACT_LAB_THREADS when set to a positive integer,
/// otherwise (or when 0) the OpenMP default. 1 without OpenMP.
int worker_count();

/// Evaluates fn(i) for i in [0, n) into a vector, in index order. Cells must
/// be independent; exceptions are captured and rethrown after the loop.
template <typename T, typename Fn>
std::vector<T> map_indexed(std::size_t n, ExecutionMode mode, Fn&& fn) {
  std::vector<T> out(n);
  std::exception_ptr failure = nullptr;
#ifdef _OPENMP
  if (mode == ExecutionMode::Parallel && n > 1) {
    const int threads = worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        {
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = fn(i);
  }
  return out;
}

}  // namespace contract_lab
