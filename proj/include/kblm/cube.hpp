#pragma once

// ComplexCube: an n_p x n_f x n_fr stack of complex frames. Stored as one
// n_k x n_fr column-major matrix whose column j is the column-major
// vectorization of frame j, so the "matrix view" demanded everywhere else is
// the storage itself and frame access is a reshaping map.

#include <utility>

#include "kblm/types.hpp"

namespace kblm {

class ComplexCube {
 public:
  using FrameMap = Eigen::Map<ComplexMatrix>;
  using ConstFrameMap = Eigen::Map<const ComplexMatrix>;

  ComplexCube() = default;

  ComplexCube(Index n_p, Index n_f, Index n_fr) : geom_{n_p, n_f, n_fr} {
    geom_.validate();
    stacked_ = ComplexMatrix::Zero(geom_.n_k(), n_fr);
  }

  // Adopts an n_k x n_fr matrix whose columns are vectorized frames.
  static ComplexCube from_matrix(Index n_p, Index n_f, ComplexMatrix stacked) {
    ComplexCube cube;
    cube.geom_ = FrameGeometry{n_p, n_f, stacked.cols()};
    cube.geom_.validate();
    if (stacked.rows() != n_p * n_f)
      throw DimensionError("ComplexCube: matrix has " + std::to_string(stacked.rows()) +
                           " rows, expected n_p*n_f = " + std::to_string(n_p * n_f));
    cube.stacked_ = std::move(stacked);
    return cube;
  }

  const FrameGeometry& geometry() const { return geom_; }
  Index n_p() const { return geom_.n_p; }
  Index n_f() const { return geom_.n_f; }
  Index n_fr() const { return geom_.n_fr; }
  Index n_k() const { return geom_.n_k(); }

  ConstFrameMap frame(Index j) const {
    check_frame(j);
    return ConstFrameMap(stacked_.col(j).data(), geom_.n_p, geom_.n_f);
  }
  FrameMap frame(Index j) {
    check_frame(j);
    return FrameMap(stacked_.col(j).data(), geom_.n_p, geom_.n_f);
  }

  // The n_k x n_fr view: column j == Vec(frame j) by construction.
  const ComplexMatrix& matrix() const { return stacked_; }
  ComplexMatrix& matrix() { return stacked_; }

 private:
  void check_frame(Index j) const {
    if (j < 0 || j >= geom_.n_fr)
      throw DimensionError("ComplexCube: frame index " + std::to_string(j) +
                           " out of range [0," + std::to_string(geom_.n_fr) + ")");
  }

  FrameGeometry geom_;
  ComplexMatrix stacked_;
};

}  // namespace kblm
