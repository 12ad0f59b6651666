// SPDX-License-Identifier: Apache-2.0
//
// Minimal parallel-for facility. Every parallel kernel in this project also
// has a serial path; results must be identical between the two, which the
// test suite checks. ISACBEAM_THREADS caps the worker count.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isacbeam {

enum class ExecPolicy { serial, openmp };

/// Worker cap: min(ISACBEAM_THREADS, omp_get_max_threads()); 1 without OpenMP.
inline int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("ISACBEAM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

inline ExecPolicy default_policy() {
  return max_threads() > 1 ? ExecPolicy::openmp : ExecPolicy::serial;
}

/// Runs body(i) for i in [0, n). Iterations must be independent; any
/// reduction is the caller's job and must not depend on iteration order.
template <class Body>
void parallel_for(std::int64_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::openmp && max_threads() > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
    for (std::int64_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
#endif
  }
  for (std::int64_t i = 0; i < n; ++i) {
    body(i);
  }
}

/// Same contract with a static chunked schedule, for cheap per-iteration work.
template <class Body>
void parallel_for_static(std::int64_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::openmp && max_threads() > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::int64_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
#endif
  }
  for (std::int64_t i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace isacbeam
