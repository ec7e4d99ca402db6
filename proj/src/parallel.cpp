#include "graphhardy/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace graphhardy {

int configure_threads_from_env() {
  if (const char* env = std::getenv("GRAPHHARDY_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // ignore malformed values and keep the runtime default
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace graphhardy
