#pragma once

// Unitary discrete Fourier transforms.
//
// All four transforms use the 1/sqrt(N) convention on both directions, so
// every map here is an isometry: ||dft2(A)||_F == ||A||_F and
// idft2(dft2(A)) == A up to roundoff. dft2/idft2 place the zero-frequency
// coefficient at index (0,0); spectrum centering is a storage convention of
// the data model (see dataset.hpp), never of the transform itself.

#include <unsupported/Eigen/FFT>

#include <cmath>

#include "kblm/types.hpp"

namespace kblm {

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;  // caches twiddle plans per size
  return engine;
}

enum class FftDir { forward, inverse };

// In-place transform of every column. Forward is the plain DFT sum, inverse
// includes the 1/N factor (Eigen's convention); unitary scaling is applied
// by the callers. Length-1 transforms are the identity.
inline void fft_columns(ComplexMatrix& m, FftDir dir) {
  const Index n = m.rows();
  if (n <= 1) return;
  auto& engine = fft_engine();
  ComplexVector tmp(n);
  for (Index c = 0; c < m.cols(); ++c) {
    if (dir == FftDir::forward)
      engine.fwd(tmp.data(), m.col(c).data(), n);
    else
      engine.inv(tmp.data(), m.col(c).data(), n);
    m.col(c) = tmp;
  }
}

inline void require_nonempty(const ComplexMatrix& frame, const char* op) {
  if (frame.rows() == 0 || frame.cols() == 0)
    throw DimensionError(std::string(op) + ": input must be non-empty");
}

}  // namespace detail

/// Unitary 2-D DFT of one frame (columns first, then rows).
inline ComplexMatrix dft2(const ComplexMatrix& frame) {
  detail::require_nonempty(frame, "dft2");
  ComplexMatrix work = frame;
  detail::fft_columns(work, detail::FftDir::forward);
  ComplexMatrix t = work.transpose();
  detail::fft_columns(t, detail::FftDir::forward);
  work = t.transpose();
  work *= 1.0 / std::sqrt(double(frame.rows()) * double(frame.cols()));
  return work;
}

/// Unitary inverse 2-D DFT; exact inverse of dft2 up to roundoff.
inline ComplexMatrix idft2(const ComplexMatrix& frame) {
  detail::require_nonempty(frame, "idft2");
  ComplexMatrix work = frame;
  detail::fft_columns(work, detail::FftDir::inverse);
  ComplexMatrix t = work.transpose();
  detail::fft_columns(t, detail::FftDir::inverse);
  work = t.transpose();
  // inverse passes already divided by n_p*n_f; rescale to the unitary factor.
  work *= std::sqrt(double(frame.rows()) * double(frame.cols()));
  return work;
}

/// Unitary 1-D DFT applied to each row independently (one row = the time
/// profile of one pixel across frames).
inline ComplexMatrix dft_time(const ComplexMatrix& series) {
  detail::require_nonempty(series, "dft_time");
  ComplexMatrix t = series.transpose();
  detail::fft_columns(t, detail::FftDir::forward);
  ComplexMatrix out = t.transpose();
  out *= 1.0 / std::sqrt(double(series.cols()));
  return out;
}

/// Inverse of dft_time.
inline ComplexMatrix idft_time(const ComplexMatrix& series) {
  detail::require_nonempty(series, "idft_time");
  ComplexMatrix t = series.transpose();
  detail::fft_columns(t, detail::FftDir::inverse);
  ComplexMatrix out = t.transpose();
  out *= std::sqrt(double(series.cols()));
  return out;
}

}  // namespace kblm
