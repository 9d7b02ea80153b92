#pragma once

// Shared scalar/matrix carriers and the error taxonomy used across kblm.
// Matrices are dense, column-major, complex<double>; file payloads are
// float32 (see io.hpp).

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace kblm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape disagreements between arguments (sizes, geometry).
struct DimensionError : Error {
  using Error::Error;
};

// Out-of-range or inconsistent parameter values.
struct ParameterError : Error {
  using Error::Error;
};

// Inputs that violate a structural precondition (e.g. non-Hermitian matrix).
struct ValidationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};
struct BadMagicError : IoError {
  using IoError::IoError;
};
struct TruncatedFileError : IoError {
  using IoError::IoError;
};
struct DimensionOverflowError : IoError {
  using IoError::IoError;
};

// Per-frame grid: n_p phase-encoding rows, n_f frequency-encoding columns,
// n_fr frames over time.
struct FrameGeometry {
  Index n_p = 0;
  Index n_f = 0;
  Index n_fr = 0;

  Index n_k() const { return n_p * n_f; }

  bool operator==(const FrameGeometry&) const = default;

  void validate() const {
    if (n_p <= 0 || n_f <= 0 || n_fr <= 0)
      throw ParameterError("FrameGeometry: all dimensions must be positive, got " +
                           to_string());
  }

  std::string to_string() const {
    return std::to_string(n_p) + "x" + std::to_string(n_f) + "x" +
           std::to_string(n_fr);
  }
};

inline bool all_finite(const ComplexMatrix& m) {
  return m.real().array().isFinite().all() && m.imag().array().isFinite().all();
}

}  // namespace kblm
