#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmm {

/// Sets the worker count from CMM_NUM_THREADS when present. Returns the count in use.
int configure_threads_from_env();

/// Runs body(k) for k in [0, count). Iterations must be independent. The first
/// exception thrown by any iteration is rethrown on the calling thread.
template <class Body>
void parallel_for(int count, Body&& body) {
  std::exception_ptr failure;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic, 4)
  for (int k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace cmm
