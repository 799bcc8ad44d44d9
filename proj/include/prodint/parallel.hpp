#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prodint::par {

// Worker cap: PRODINT_THREADS when set, otherwise the OpenMP default.
inline int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("PRODINT_THREADS")) {
      int n = std::atoi(env);
      if (n >= 1) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }();
  return cached;
}

// Serial reference implementations. The OpenMP kernels below must agree with
// these exactly: max is order-independent and for_each writes disjoint slots.
template <typename Fn>
double max_reduce_serial(long n, Fn&& f) {
  double worst = 0.0;
  for (long i = 0; i < n; ++i) worst = std::max(worst, f(i));
  return worst;
}

template <typename Fn>
void for_each_serial(long n, Fn&& f) {
  for (long i = 0; i < n; ++i) f(i);
}

template <typename Fn>
double max_reduce(long n, Fn&& f) {
#ifdef _OPENMP
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(dynamic) \
    num_threads(max_threads())
  for (long i = 0; i < n; ++i) worst = std::max(worst, f(i));
  return worst;
#else
  return max_reduce_serial(n, f);
#endif
}

template <typename Fn>
void for_each(long n, Fn&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (long i = 0; i < n; ++i) f(i);
#else
  for_each_serial(n, f);
#endif
}

}  // namespace prodint::par
