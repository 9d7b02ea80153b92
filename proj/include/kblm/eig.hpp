#pragma once

// Dense Hermitian eigendecomposition with a deterministic output convention.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "kblm/types.hpp"

namespace kblm {

struct HermitianEigenResult {
  ComplexMatrix vectors;  // n x d, orthonormal columns, ascending eigenvalue order
  RealVector values;      // the d smallest eigenvalues, ascending
};

// Eigenvectors of the d smallest eigenvalues of a Hermitian matrix.
//
// Determinism convention: eigenvalues ascending (ties keep the order produced
// by the tridiagonalization pipeline), and each eigenvector is rotated so its
// first entry of magnitude > 1e-12 is real and positive.
inline HermitianEigenResult hermitian_smallest_eigvecs(const ComplexMatrix& m, Index d) {
  const Index n = m.rows();
  if (n == 0 || m.cols() != n)
    throw DimensionError("hermitian_smallest_eigvecs: matrix must be square and non-empty");
  if (d < 1 || d > n)
    throw ParameterError("hermitian_smallest_eigvecs: need 1 <= d <= n, got d=" +
                         std::to_string(d));
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-10 * scale)
    throw ValidationError("hermitian_smallest_eigvecs: input is not Hermitian "
                          "within 1e-10 relative tolerance");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian_smallest_eigvecs: eigensolver failed to converge");

  HermitianEigenResult out;
  out.vectors = solver.eigenvectors().leftCols(d);
  out.values = solver.eigenvalues().head(d);
  for (Index c = 0; c < d; ++c) {
    for (Index r = 0; r < n; ++r) {
      const Complex v = out.vectors(r, c);
      if (std::abs(v) > 1e-12) {
        out.vectors.col(c) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
  return out;
}

}  // namespace kblm
