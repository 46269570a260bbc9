#include "cmm/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cmm {

int configure_threads_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("CMM_NUM_THREADS")) {
    const int requested = std::atoi(env);
    if (requested > 0) omp_set_num_threads(requested);
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cmm
