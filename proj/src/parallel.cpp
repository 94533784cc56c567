#include "agfti/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

#ifdef AGFTI_HAVE_OPENMP
#include <omp.h>
#endif

namespace agfti {

void set_num_threads(int n) {
#ifdef AGFTI_HAVE_OPENMP
  if (n <= 0) n = omp_get_num_procs();
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int num_threads() {
#ifdef AGFTI_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int threads_from_env() {
  const char* raw = std::getenv("AGFTI_THREADS");
  if (raw == nullptr) return 0;
  try {
    int n = std::stoi(raw);
    return n > 0 ? n : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

void parallel_for(Index n, const std::function<void(Index)>& body) {
  std::exception_ptr first_error;
  std::mutex error_mutex;
#ifdef AGFTI_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (n > 1)
#endif
  for (Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace agfti
