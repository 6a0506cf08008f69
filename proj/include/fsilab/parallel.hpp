#pragma once

// OpenMP-parallel elementwise loops. Reductions stay serial so that results
// are independent of the thread count; only maps are parallelized.

#if defined(_OPENMP)
#define FSILAB_OMP_FOR _Pragma("omp parallel for")
#define FSILAB_OMP_FOR_COLLAPSE2 _Pragma("omp parallel for collapse(2)")
#else
#define FSILAB_OMP_FOR
#define FSILAB_OMP_FOR_COLLAPSE2
#endif

namespace fsilab {

inline bool openmp_enabled() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

}  // namespace fsilab
