#pragma once

// Complex-valued kernel functions over navigator vectors and the landmark
// Gram matrix K = Phi^H Phi.
//
// Three kinds:
//   gaussian_modulus      exp(-gamma ||x - conj(y)||^2)        (real-valued)
//   gaussian_holomorphic  exp(-gamma sum_i (x_i - conj(y_i))^2) (complex)
//   polynomial            (x^H y + c)^r, real c >= 0, integer r >= 1
// All three satisfy k(y, x) == conj(k(x, y)), so the Gram matrix is
// Hermitian; assembly mirrors the upper triangle to make that exact.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kblm/types.hpp"

namespace kblm {

enum class KernelKind { gaussian_modulus, gaussian_holomorphic, polynomial };

inline const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::gaussian_modulus: return "gaussian_modulus";
    case KernelKind::gaussian_holomorphic: return "gaussian_holomorphic";
    case KernelKind::polynomial: return "polynomial";
  }
  return "?";
}

inline KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "gaussian_modulus") return KernelKind::gaussian_modulus;
  if (s == "gaussian_holomorphic") return KernelKind::gaussian_holomorphic;
  if (s == "polynomial") return KernelKind::polynomial;
  throw ParameterError("kernel.kind: unknown kernel '" + s + "'");
}

struct KernelSpec {
  KernelKind kind = KernelKind::gaussian_modulus;
  double gamma = 0.0;  // <= 0 requests the median heuristic at Gram assembly
  double c = 1.0;      // polynomial offset, real >= 0
  int r = 2;           // polynomial degree, >= 1
};

inline Complex kernel_eval(const KernelSpec& spec, const ComplexVector& x,
                           const ComplexVector& y) {
  if (x.size() != y.size())
    throw DimensionError("kernel_eval: vectors of length " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
  switch (spec.kind) {
    case KernelKind::gaussian_modulus: {
      if (spec.gamma <= 0.0)
        throw ParameterError("kernel_eval: kernel.gamma must be positive");
      const double d2 = (x - y.conjugate()).squaredNorm();
      return Complex(std::exp(-spec.gamma * d2), 0.0);
    }
    case KernelKind::gaussian_holomorphic: {
      if (spec.gamma <= 0.0)
        throw ParameterError("kernel_eval: kernel.gamma must be positive");
      const ComplexVector diff = x - y.conjugate();
      const Complex s = (diff.array() * diff.array()).sum();
      return std::exp(-spec.gamma * s);
    }
    case KernelKind::polynomial: {
      if (spec.c < 0.0)
        throw ParameterError("kernel_eval: kernel.c must be nonnegative");
      if (spec.r < 1)
        throw ParameterError("kernel_eval: kernel.r must be a positive integer");
      const Complex base = x.dot(y) + Complex(spec.c, 0.0);  // x.dot(y) == x^H y
      Complex p(1.0, 0.0);
      for (int i = 0; i < spec.r; ++i) p *= base;
      return p;
    }
  }
  throw ParameterError("kernel_eval: invalid kernel kind");
}

/// Median heuristic: 1 / median of pairwise squared distances between
/// landmark columns (even count: mean of the two central values). Falls back
/// to 1 when all landmarks coincide.
inline double median_heuristic_gamma(const ComplexMatrix& landmarks) {
  const Index n = landmarks.cols();
  std::vector<double> d2;
  d2.reserve(std::size_t(n) * (n - 1) / 2);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d2.push_back((landmarks.col(i) - landmarks.col(j)).squaredNorm());
  if (d2.empty()) return 1.0;
  std::sort(d2.begin(), d2.end());
  const std::size_t m = d2.size();
  const double median = (m % 2 == 1) ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
  return median > 0.0 ? 1.0 / median : 1.0;
}

struct KernelMatrix {
  ComplexMatrix entries;  // N_l x N_l, Hermitian, real diagonal
  KernelSpec spec;        // with gamma resolved
};

inline KernelMatrix kernel_matrix(KernelSpec spec, const ComplexMatrix& landmarks) {
  const Index n = landmarks.cols();
  if (n < 2)
    throw ParameterError("kernel_matrix: need at least 2 landmarks, got " +
                         std::to_string(n));
  if (spec.kind != KernelKind::polynomial && spec.gamma <= 0.0)
    spec.gamma = median_heuristic_gamma(landmarks);

  ComplexMatrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    const Complex diag = kernel_eval(spec, landmarks.col(i), landmarks.col(i));
    k(i, i) = Complex(diag.real(), 0.0);
    for (Index j = i + 1; j < n; ++j) {
      k(i, j) = kernel_eval(spec, landmarks.col(i), landmarks.col(j));
      k(j, i) = std::conj(k(i, j));
    }
  }
  return KernelMatrix{std::move(k), spec};
}

}  // namespace kblm
