#pragma once

// Proximal/projection primitives shared by the solvers.

#include <algorithm>
#include <cmath>

#include "kblm/types.hpp"

namespace kblm {

// Complex soft-thresholding: shrinks the magnitude by `threshold`, keeps the
// phase. This is the proximal operator of threshold*|.|.
inline Complex soft_threshold(Complex value, double threshold) {
  if (threshold < 0.0)
    throw ParameterError("soft_threshold: threshold must be nonnegative");
  const double mag = std::abs(value);
  if (mag <= threshold) return Complex(0.0, 0.0);
  return value * (1.0 - threshold / mag);
}

// Entrywise soft-threshold, in place.
inline void soft_threshold_inplace(ComplexMatrix& m, double threshold) {
  if (threshold < 0.0)
    throw ParameterError("soft_threshold: threshold must be nonnegative");
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r) m(r, c) = soft_threshold(m(r, c), threshold);
}

// Euclidean projection onto the ball {x : ||x|| <= radius}.
inline ComplexVector project_column_ball(const ComplexVector& column, double radius) {
  if (radius <= 0.0)
    throw ParameterError("project_column_ball: radius must be positive");
  const double norm = column.norm();
  if (norm <= radius) return column;
  return column * (radius / norm);
}

// Projects every column of `m` onto the radius ball, in place.
inline void project_columns_ball_inplace(ComplexMatrix& m, double radius) {
  if (radius <= 0.0)
    throw ParameterError("project_column_ball: radius must be positive");
  for (Index c = 0; c < m.cols(); ++c) {
    const double norm = m.col(c).norm();
    if (norm > radius) m.col(c) *= radius / norm;
  }
}

// Euclidean projection onto the hyperplane {b : sum(b) = 1}.
inline ComplexVector project_colsum_one(const ComplexVector& column) {
  if (column.size() == 0)
    throw DimensionError("project_colsum_one: empty column");
  const Complex shift = (column.sum() - Complex(1.0, 0.0)) / double(column.size());
  return column.array() - shift;
}

inline void project_colsum_one_inplace(ComplexMatrix& m) {
  if (m.rows() == 0) throw DimensionError("project_colsum_one: empty column");
  for (Index c = 0; c < m.cols(); ++c) {
    const Complex shift = (m.col(c).sum() - Complex(1.0, 0.0)) / double(m.rows());
    m.col(c).array() -= shift;
  }
}

// Sum of complex moduli (the l1 norm used for B and Z in the recovery task).
inline double l1_norm(const ComplexMatrix& m) {
  return m.cwiseAbs().sum();
}

}  // namespace kblm
