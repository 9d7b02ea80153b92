#pragma once

// Shared helpers for the test suites: deterministic random data and the
// brute-force prox oracle.

#include <complex>
#include <random>

#include "kblm/types.hpp"

namespace kblm_test {

using kblm::Complex;
using kblm::ComplexMatrix;
using kblm::ComplexVector;
using kblm::Index;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = Complex(dist(rng), dist(rng));
  return m;
}

// Exactly feasible coefficient matrix: every column sums to one.
inline ComplexMatrix random_unit_colsum(std::mt19937_64& rng, Index rows, Index cols) {
  ComplexMatrix b = random_matrix(rng, rows, cols);
  for (Index c = 0; c < cols; ++c) {
    const Complex shift = (b.col(c).sum() - Complex(1, 0)) / double(rows);
    b.col(c).array() -= shift;
  }
  return b;
}

// Independent brute-force prox oracle for t*|.| at `a` (coarse-to-fine grid;
// the refinement boxes span three cells so no basin is lost near the kink).
inline Complex grid_prox_oracle(Complex a, double t) {
  auto cost = [&](Complex z) { return 0.5 * std::norm(z - a) + t * std::abs(z); };
  Complex best(0.0, 0.0);
  double best_cost = cost(best);
  double half = std::abs(a) + t + 0.5;
  Complex center(0.0, 0.0);
  for (int stage = 0; stage < 5; ++stage) {
    const int steps = 80;
    const double cell = 2.0 * half / steps;
    Complex stage_best = best;
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j <= steps; ++j) {
        const Complex z(center.real() - half + i * cell, center.imag() - half + j * cell);
        const double c = cost(z);
        if (c < best_cost) {
          best_cost = c;
          stage_best = z;
        }
      }
    best = stage_best;
    center = best;
    half = 3.0 * cell;
  }
  return best;
}

}  // namespace kblm_test
