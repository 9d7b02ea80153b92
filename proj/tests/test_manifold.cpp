#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kblm/kernels.hpp"
#include "kblm/manifold.hpp"

using namespace kblm;

namespace {

std::mt19937_64 rng(99);

ComplexMatrix random_matrix(Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = Complex(dist(rng), dist(rng));
  return m;
}

KernelMatrix wrap_kernel(ComplexMatrix k) {
  KernelMatrix km;
  km.entries = std::move(k);
  km.spec.kind = KernelKind::polynomial;
  km.spec.c = 0.0;
  km.spec.r = 1;
  km.spec.gamma = 1.0;
  return km;
}

KernelMatrix collinear_kernel() {
  ComplexMatrix k(3, 3);
  k << Complex(1, 0), Complex(2, 0), Complex(3, 0),  //
      Complex(2, 0), Complex(4, 0), Complex(6, 0),   //
      Complex(3, 0), Complex(6, 0), Complex(9, 0);
  return wrap_kernel(std::move(k));
}

// Random exactly-feasible weight matrix: zero diagonal, unit column sums.
ComplexMatrix random_feasible_weights(Index n) {
  ComplexMatrix w = random_matrix(n, n);
  for (Index j = 0; j < n; ++j) {
    w(j, j) = Complex(0, 0);
    Complex off(0, 0);
    for (Index i = 0; i < n; ++i)
      if (i != j) off += w(i, j);
    const Complex shift = (off - Complex(1, 0)) / double(n - 1);
    for (Index i = 0; i < n; ++i)
      if (i != j) w(i, j) -= shift;
  }
  return w;
}

double merit(const ComplexMatrix& k, const ComplexMatrix& w, double lambda_w) {
  return (k - k * w).squaredNorm() + lambda_w * l1_norm(w);
}

}  // namespace

TEST_CASE("collinear landmarks admit an exact affine reconstruction") {
  // K has rank one; the feasible exact solution is unique per column and the
  // middle column is [0.5, 0, 0.5].
  WeightMatrix w = solve_weights(collinear_kernel(), 1e-6, 1e-10, 5000);
  const ComplexMatrix& k = collinear_kernel().entries;
  CHECK((k - k * w.entries).norm() <= 1e-3);
  CHECK(std::abs(w.entries(0, 1) - Complex(0.5, 0)) <= 2e-3);
  CHECK(std::abs(w.entries(1, 1)) == 0.0);  // diagonal exactly zero
  CHECK(std::abs(w.entries(2, 1) - Complex(0.5, 0)) <= 2e-3);
}

TEST_CASE("two landmarks force the exchange matrix") {
  ComplexMatrix k(2, 2);
  k << Complex(2, 0), Complex(0.5, 0.25), Complex(0.5, -0.25), Complex(1, 0);
  WeightMatrix w = solve_weights(wrap_kernel(std::move(k)), 0.01);
  CHECK(w.entries(0, 0) == Complex(0, 0));
  CHECK(w.entries(1, 1) == Complex(0, 0));
  CHECK(std::abs(w.entries(1, 0) - Complex(1, 0)) <= 1e-12);
  CHECK(std::abs(w.entries(0, 1) - Complex(1, 0)) <= 1e-12);
}

TEST_CASE("solver output is exactly feasible with monotone merit") {
  ComplexMatrix lm = random_matrix(4, 6);
  KernelMatrix k = kernel_matrix(KernelSpec{}, lm);
  WeightMatrix w = solve_weights(k, 0.0);  // auto lambda_w

  CHECK(w.lambda_w > 0.0);
  for (Index j = 0; j < 6; ++j) {
    CHECK(w.entries(j, j) == Complex(0, 0));
    CHECK(std::abs(w.entries.col(j).sum() - Complex(1, 0)) <= 1e-12);
  }
  for (std::size_t i = 1; i < w.diag.merit_trace.size(); ++i)
    CHECK(w.diag.merit_trace[i] <=
          w.diag.merit_trace[i - 1] + 1e-10 * (1.0 + std::abs(w.diag.merit_trace[i - 1])));
  CHECK(w.diag.iterations > 0);
}

TEST_CASE("huge sparsity weight still respects the affine lower bound") {
  ComplexMatrix lm = random_matrix(3, 5);
  KernelMatrix k = kernel_matrix(KernelSpec{}, lm);
  WeightMatrix w = solve_weights(k, 1e6);
  for (Index j = 0; j < 5; ++j) {
    double l1 = 0.0;
    for (Index i = 0; i < 5; ++i) l1 += std::abs(w.entries(i, j));
    CHECK(l1 >= 1.0 - 1e-9);  // any unit-sum column has l1 >= 1
  }
}

TEST_CASE("non-Hermitian kernel is rejected") {
  ComplexMatrix bad = random_matrix(3, 3);
  bad(0, 1) += Complex(3, 3);
  CHECK_THROWS_AS(solve_weights(wrap_kernel(std::move(bad)), 0.1), ValidationError);
}

TEST_CASE("tiny-scale grid oracle: solver column is slice-optimal") {
  // Real positive-definite kernel; the merit is column-separable, so gridding
  // one column with the others fixed at the solver's answer bounds the
  // solver's suboptimality along that slice.
  ComplexMatrix lm(2, 4);
  lm << Complex(0.0, 0), Complex(1.0, 0), Complex(2.5, 0), Complex(3.0, 0),  //
      Complex(1.0, 0), Complex(-1.0, 0), Complex(0.5, 0), Complex(2.0, 0);
  KernelSpec spec;
  spec.gamma = 0.15;
  KernelMatrix k = kernel_matrix(spec, lm);
  const double lambda_w = 1e-4;

  WeightMatrix w = solve_weights(k, lambda_w, 1e-12, 20000);
  const double solver_merit = merit(k.entries, w.entries, lambda_w);

  double grid_min = std::numeric_limits<double>::infinity();
  ComplexMatrix trial = w.entries;
  for (double a = -1.5; a <= 2.0 + 1e-12; a += 0.01)
    for (double b = -1.5; b <= 2.0 + 1e-12; b += 0.01) {
      trial(0, 0) = Complex(0, 0);
      trial(1, 0) = Complex(a, 0);
      trial(2, 0) = Complex(b, 0);
      trial(3, 0) = Complex(1.0 - a - b, 0);
      grid_min = std::min(grid_min, merit(k.entries, trial, lambda_w));
    }
  CHECK(solver_merit <= grid_min + 1e-3);
}

TEST_CASE("reduced kernel of the exchange weight matrix") {
  ComplexMatrix w(2, 2);
  w << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  WeightMatrix wm;
  wm.entries = w;
  ReducedKernel rk = compute_reduced_kernel(wm, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(rk.entries.rows() == 1);
  CHECK(std::abs(rk.entries(0, 0) - Complex(inv_sqrt2, 0)) <= 1e-10);
  CHECK(std::abs(rk.entries(0, 1) - Complex(inv_sqrt2, 0)) <= 1e-10);
  CHECK(std::abs(rk.eigenvalues(0)) <= 1e-12);
}

TEST_CASE("reduced kernel orthonormality and eigenvalue-sum identity") {
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 4 + Index(rng() % 5);
    const Index d = 1 + Index(rng() % (n - 1));
    WeightMatrix wm;
    wm.entries = random_feasible_weights(n);
    ReducedKernel rk = compute_reduced_kernel(wm, d);

    CHECK((rk.entries * rk.entries.adjoint() - ComplexMatrix::Identity(d, d)).norm() <=
          1e-8);

    // ||Kc - Kc W||_F^2 equals the sum of the d smallest eigenvalues of
    // (I-W)(I-W)^H, checked against a full-spectrum oracle.
    const double residual = (rk.entries - rk.entries * wm.entries).squaredNorm();
    const ComplexMatrix r =
        ComplexMatrix::Identity(n, n) - wm.entries;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> full(r * r.adjoint());
    double expected = 0.0;
    for (Index i = 0; i < d; ++i) expected += full.eigenvalues()(i);
    CHECK(std::abs(residual - expected) <= 1e-8 * (1.0 + expected));

    // Rows are ordered by ascending eigenvalue.
    for (Index i = 1; i < d; ++i) CHECK(rk.eigenvalues(i) >= rk.eigenvalues(i - 1));
  }
}

TEST_CASE("reduced kernel dimension validation") {
  WeightMatrix wm;
  wm.entries = random_feasible_weights(4);
  CHECK_THROWS_AS(compute_reduced_kernel(wm, 0), ParameterError);
  CHECK_THROWS_AS(compute_reduced_kernel(wm, 4), ParameterError);
  CHECK_THROWS_AS(compute_reduced_kernel(wm, 7), ParameterError);
}
