#pragma once

// (k,t)-space containers, the Vec(.) convention, spectrum centering and
// navigator extraction.
//
// Storage convention: k-space cubes are kept centered, i.e. the
// zero-frequency coefficient of frame j sits at row floor(n_p/2), column
// floor(n_f/2). The conversions below own the centering permutation; the raw
// dft2/idft2 primitives never shift. This makes the navigator region a
// contiguous block of central rows.

#include <string>
#include <utility>

#include "kblm/cube.hpp"
#include "kblm/fourier.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct KTDataset {
  ComplexCube cube;  // centered k-space

  const FrameGeometry& geometry() const { return cube.geometry(); }
  Index n_k() const { return cube.n_k(); }
};

struct ImageSeries {
  ComplexCube cube;

  const FrameGeometry& geometry() const { return cube.geometry(); }
};

// nu central phase-encoding lines of every frame, vectorized per frame into
// the columns of a (nu*n_f) x n_fr matrix.
struct NavigatorMatrix {
  Index nu = 0;
  ComplexMatrix entries;
};

/// Column-major stacking of a frame into a vector.
inline ComplexVector vectorize(const ComplexMatrix& frame) {
  return Eigen::Map<const ComplexVector>(frame.data(), frame.size());
}

/// Inverse of vectorize for a given frame shape.
inline ComplexMatrix devectorize(const ComplexVector& v, Index n_p, Index n_f) {
  if (v.size() != n_p * n_f)
    throw DimensionError("devectorize: vector of length " + std::to_string(v.size()) +
                         " does not match " + std::to_string(n_p) + "x" +
                         std::to_string(n_f));
  return Eigen::Map<const ComplexMatrix>(v.data(), n_p, n_f);
}

/// First phase-line index of the nu central rows (even/odd convention:
/// zero-based rows floor((n_p - nu)/2) ... floor((n_p - nu)/2) + nu - 1).
inline Index navigator_row_begin(Index n_p, Index nu) {
  return (n_p - nu) / 2;
}

inline NavigatorMatrix extract_navigator(const KTDataset& data, Index nu) {
  const Index n_p = data.cube.n_p();
  const Index n_f = data.cube.n_f();
  if (nu < 1 || nu > n_p)
    throw ParameterError("extract_navigator: nu=" + std::to_string(nu) +
                         " out of range [1," + std::to_string(n_p) + "]");
  const Index row0 = navigator_row_begin(n_p, nu);
  NavigatorMatrix nav;
  nav.nu = nu;
  nav.entries.resize(nu * n_f, data.cube.n_fr());
  for (Index j = 0; j < data.cube.n_fr(); ++j) {
    ComplexMatrix block = data.cube.frame(j).block(row0, 0, nu, n_f);
    nav.entries.col(j) = Eigen::Map<const ComplexVector>(block.data(), block.size());
  }
  return nav;
}

// --- spectrum centering --------------------------------------------------

/// Circularly shifts so that index (0,0) moves to (floor(r/2), floor(c/2)).
inline ComplexMatrix fftshift2(const ComplexMatrix& m) {
  const Index nr = m.rows(), nc = m.cols();
  const Index sr = nr / 2, sc = nc / 2;
  ComplexMatrix out(nr, nc);
  for (Index c = 0; c < nc; ++c) {
    const Index cc = (c + sc) % nc;
    for (Index r = 0; r < nr; ++r) out((r + sr) % nr, cc) = m(r, c);
  }
  return out;
}

/// Exact inverse of fftshift2 (distinct for odd sizes).
inline ComplexMatrix ifftshift2(const ComplexMatrix& m) {
  const Index nr = m.rows(), nc = m.cols();
  const Index sr = nr / 2, sc = nc / 2;
  ComplexMatrix out(nr, nc);
  for (Index c = 0; c < nc; ++c) {
    const Index cc = (c + sc) % nc;
    for (Index r = 0; r < nr; ++r) out(r, c) = m((r + sr) % nr, cc);
  }
  return out;
}

/// Unitary image -> centered k-space map for one frame.
inline ComplexMatrix kspace_frame_from_image(const ComplexMatrix& image) {
  return fftshift2(dft2(image));
}

/// Unitary centered k-space -> image map for one frame.
inline ComplexMatrix image_frame_from_kspace(const ComplexMatrix& kspace) {
  return idft2(ifftshift2(kspace));
}

// Matrix-level variants: each column of an n_k x n_fr matrix is one
// vectorized frame. These are the operator F (and its inverse) used by the
// reconstruction solvers.
inline ComplexMatrix to_kspace_matrix(const ComplexMatrix& images, const FrameGeometry& g) {
  if (images.rows() != g.n_k())
    throw DimensionError("to_kspace_matrix: row count does not match geometry " +
                         g.to_string());
  ComplexMatrix out(images.rows(), images.cols());
  for (Index j = 0; j < images.cols(); ++j) {
    const Eigen::Map<const ComplexMatrix> frame(images.col(j).data(), g.n_p, g.n_f);
    const ComplexMatrix k = kspace_frame_from_image(frame);
    out.col(j) = Eigen::Map<const ComplexVector>(k.data(), k.size());
  }
  return out;
}

inline ComplexMatrix to_image_matrix(const ComplexMatrix& kspace, const FrameGeometry& g) {
  if (kspace.rows() != g.n_k())
    throw DimensionError("to_image_matrix: row count does not match geometry " +
                         g.to_string());
  ComplexMatrix out(kspace.rows(), kspace.cols());
  for (Index j = 0; j < kspace.cols(); ++j) {
    const Eigen::Map<const ComplexMatrix> frame(kspace.col(j).data(), g.n_p, g.n_f);
    const ComplexMatrix img = image_frame_from_kspace(frame);
    out.col(j) = Eigen::Map<const ComplexVector>(img.data(), img.size());
  }
  return out;
}

inline ImageSeries to_image(const KTDataset& data) {
  const FrameGeometry& g = data.geometry();
  return ImageSeries{ComplexCube::from_matrix(g.n_p, g.n_f,
                                              to_image_matrix(data.cube.matrix(), g))};
}

inline KTDataset to_kspace(const ImageSeries& images) {
  const FrameGeometry& g = images.geometry();
  return KTDataset{ComplexCube::from_matrix(g.n_p, g.n_f,
                                            to_kspace_matrix(images.cube.matrix(), g))};
}

}  // namespace kblm
