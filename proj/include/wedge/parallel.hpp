#pragma once

#include <exception>
#include <vector>

#include "wedge/geometry.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wedge {

// Runs body(i) for i in [0, n). The parallel path uses an OpenMP loop; an
// exception thrown by any iteration is rethrown afterwards, lowest index first,
// so both paths fail identically.
template <class Body>
void for_each_index(int n, Execution exec, Body&& body) {
  if (exec == Execution::serial || n < 2) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace wedge
