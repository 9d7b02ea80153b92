#pragma once

// Deterministic power iteration for the squared spectral norm, used for the
// 1/L step sizes of the proximal solvers.

#include "kblm/types.hpp"

namespace kblm {

/// Largest singular value squared of `a`, via power iteration on a^H a with
/// an all-ones start vector. If the iterate lands in the null space it
/// restarts once from a ramp vector, then falls back to the (upper-bounding)
/// squared Frobenius norm. Returns 0 for the zero matrix.
inline double operator_norm_sq(const ComplexMatrix& a, int iterations = 50) {
  if (a.size() == 0) return 0.0;
  ComplexVector v = ComplexVector::Ones(a.cols());
  v.normalize();
  bool restarted = false;
  for (int i = 0; i < iterations; ++i) {
    ComplexVector w = a.adjoint() * (a * v);
    const double n = w.norm();
    if (n == 0.0) {
      if (restarted) return a.squaredNorm();
      restarted = true;
      for (Index k = 0; k < v.size(); ++k) v(k) = Complex(double(k + 1), 0.0);
      v.normalize();
      continue;
    }
    v = w / n;
  }
  return (a * v).squaredNorm();
}

}  // namespace kblm
