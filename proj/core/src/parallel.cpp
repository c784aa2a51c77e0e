#include "ktrr/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef KTRR_HAVE_OPENMP
#include <omp.h>
#endif

namespace ktrr {
namespace {

int initial_threads() {
  if (const char* env = std::getenv("KTRR_NUM_THREADS")) {
    try {
      int n = std::stoi(env);
      return n > 0 ? n : 0;
    } catch (...) {
      return 0;
    }
  }
  return 0;
}

std::atomic<int>& cap() {
  static std::atomic<int> value{initial_threads()};
  return value;
}

}  // namespace

int max_threads() {
  int n = cap().load();
#ifdef KTRR_HAVE_OPENMP
  if (n <= 0) n = omp_get_max_threads();
#else
  n = 1;
#endif
  return n;
}

void set_max_threads(int n) { cap().store(n > 0 ? n : 0); }

}  // namespace ktrr
