#pragma once

// Manifold structure over the mapped landmarks:
//   solve_weights:          min_W ||K - KW||_F^2 + lambda_w ||W||_1
//                           s.to  1^T W = 1^T, diag(W) = 0
//   compute_reduced_kernel: rows of K-check = Hermitian transpose of the d
//                           minimal eigenvectors of (I - W)(I - W)^H.
//
// The weight solver is a proximal-gradient splitting: gradient step on the
// smooth term, entrywise complex soft-threshold, then the exact joint
// projection onto {w_jj = 0, sum(w_j) = 1} per column (diagonal zeroing
// followed by the hyperplane projection of the off-diagonal subvector).
// Feasibility is exact at every iterate; the merit value is kept monotone by
// a backtracking step rule.

#include <string>
#include <utility>
#include <vector>

#include "kblm/eig.hpp"
#include "kblm/kernels.hpp"
#include "kblm/power.hpp"
#include "kblm/prox.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct SolverDiagnostics {
  int iterations = 0;
  double final_residual = 0.0;  // relative iterate change at the last step
  bool converged = false;
  std::vector<double> merit_trace;
};

struct WeightMatrix {
  ComplexMatrix entries;  // N_l x N_l, zero diagonal, unit column sums
  double lambda_w = 0.0;
  SolverDiagnostics diag;
};

struct ReducedKernel {
  ComplexMatrix entries;   // d x N_l with entries * entries^H = I_d
  RealVector eigenvalues;  // the d smallest eigenvalues of (I-W)(I-W)^H
};

namespace detail {

// Exact Euclidean projection of every column onto {w_jj = 0, sum = 1}.
inline void project_weight_feasible(ComplexMatrix& w) {
  const Index n = w.rows();
  for (Index j = 0; j < n; ++j) {
    w(j, j) = Complex(0.0, 0.0);
    Complex off_sum(0.0, 0.0);
    for (Index i = 0; i < n; ++i)
      if (i != j) off_sum += w(i, j);
    const Complex shift = (off_sum - Complex(1.0, 0.0)) / double(n - 1);
    for (Index i = 0; i < n; ++i)
      if (i != j) w(i, j) -= shift;
  }
}

inline double weight_merit(const ComplexMatrix& k, const ComplexMatrix& w,
                           double lambda_w) {
  return (k - k * w).squaredNorm() + lambda_w * l1_norm(w);
}

}  // namespace detail

inline WeightMatrix solve_weights(const KernelMatrix& kernel, double lambda_w,
                                  double tol = 1e-6, int max_iter = 2000) {
  const ComplexMatrix& k = kernel.entries;
  const Index n = k.rows();
  if (n < 2 || k.cols() != n)
    throw DimensionError("solve_weights: kernel matrix must be square with N_l >= 2");
  if ((k - k.adjoint()).norm() > 1e-10 * k.norm())
    throw ValidationError("solve_weights: kernel matrix is not Hermitian");
  if (lambda_w <= 0.0) lambda_w = 0.1 * k.norm() / double(n);
  if (tol <= 0.0) throw ParameterError("solve_weights: tol must be positive");
  if (max_iter < 1) throw ParameterError("solve_weights: max_iter must be >= 1");

  const double lip = std::max(operator_norm_sq(k), 1e-30);
  double step = 1.0 / lip;

  // Feasible start: uniform off-diagonal columns.
  ComplexMatrix w = ComplexMatrix::Constant(n, n, Complex(1.0 / double(n - 1), 0.0));
  w.diagonal().setZero();

  WeightMatrix out;
  out.lambda_w = lambda_w;
  double merit = detail::weight_merit(k, w, lambda_w);
  out.diag.merit_trace.push_back(merit);

  const ComplexMatrix kh = k.adjoint();
  int it = 0;
  for (; it < max_iter; ++it) {
    const ComplexMatrix grad = kh * (k * w - k);
    double try_step = step;
    ComplexMatrix next;
    double next_merit = merit;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      next = w - try_step * grad;
      soft_threshold_inplace(next, try_step * lambda_w / 2.0);
      detail::project_weight_feasible(next);
      next_merit = detail::weight_merit(k, next, lambda_w);
      if (next_merit <= merit + 1e-12 * (1.0 + std::abs(merit))) {
        accepted = true;
        break;
      }
      try_step *= 0.5;
    }
    if (!accepted) {
      // No descent step exists down to the smallest trial: merit fixed point.
      out.diag.converged = true;
      break;
    }

    const double rel = (next - w).norm() / std::max(w.norm(), 1e-30);
    w = std::move(next);
    merit = next_merit;
    out.diag.merit_trace.push_back(merit);
    out.diag.final_residual = rel;
    if (rel <= tol) {
      out.diag.converged = true;
      ++it;
      break;
    }
  }
  out.diag.iterations = it;
  out.entries = std::move(w);
  return out;
}

inline ReducedKernel compute_reduced_kernel(const WeightMatrix& weights, Index d) {
  const ComplexMatrix& w = weights.entries;
  const Index n = w.rows();
  if (n < 2 || w.cols() != n)
    throw DimensionError("compute_reduced_kernel: weight matrix must be square");
  if (d < 1 || d >= n)
    throw ParameterError("compute_reduced_kernel: need 1 <= d < N_l, got d=" +
                         std::to_string(d) + ", N_l=" + std::to_string(n));
  const ComplexMatrix residual = ComplexMatrix::Identity(n, n) - w;
  ComplexMatrix m = residual * residual.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();  // scrub roundoff asymmetry
  HermitianEigenResult eig = hermitian_smallest_eigvecs(m, d);
  return ReducedKernel{eig.vectors.adjoint(), std::move(eig.values)};
}

}  // namespace kblm
