#pragma once

#include "quatfact/qmatrix.hpp"

namespace quatfact::kernels {

// Both kernels compute C = A·B for quaternion matrices. Every output entry is
// reduced over the inner index in the same order regardless of thread count,
// so the OpenMP kernel is bitwise reproducible across runs and thread caps.

namespace serial {

/// Reference: one Hamilton product per (s, t, k) triple.
QMatrix qgemm(const QMatrix &a, const QMatrix &b);

}  // namespace serial

namespace omp {

/// Plane-level kernel, parallel over output columns.
QMatrix qgemm(const QMatrix &a, const QMatrix &b);

}  // namespace omp

/// Caps kernel parallelism. 0 restores the OpenMP default.
void set_thread_cap(int threads);
/// Applies QUATFACT_THREADS if set to a positive integer. Returns the cap in effect (0 = default).
int apply_thread_env();
int max_threads();

}  // namespace quatfact::kernels
