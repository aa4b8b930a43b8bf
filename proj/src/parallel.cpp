#include "contract_lab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace contract_lab {

int worker_count() {
#ifdef _OPENMP
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("CONTRACT_LAB_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested > 0) threads = requested;
    } catch (...) {
      // unparsable value falls back to the OpenMP default
    }
  }
  return threads < 1 ? 1 : threads;
#else
  return 1;
#endif
}

}  // namespace contract_lab
