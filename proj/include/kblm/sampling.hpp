#pragma once

// 1-D Cartesian sampling: per-frame phase-line masks with always-on navigator
// lines, the sampling operator S (zero-fill restriction), and the achieved
// acceleration rate.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kblm/dataset.hpp"
#include "kblm/rng.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct SamplingMask {
  // lines(r, j) == 1 iff phase line r is acquired in frame j.
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> lines;
  Index nu = 0;
  Index n_p = 0;
  Index n_f = 0;  // 0 after file load: the format does not carry n_f
  Index n_fr = 0;

  Index sampled_line_count() const {
    Index total = 0;
    for (Index j = 0; j < lines.cols(); ++j)
      for (Index r = 0; r < lines.rows(); ++r) total += lines(r, j);
    return total;
  }

  static SamplingMask full(const FrameGeometry& g, Index nu) {
    g.validate();
    SamplingMask m;
    m.lines.setOnes(g.n_p, g.n_fr);
    m.nu = nu;
    m.n_p = g.n_p;
    m.n_f = g.n_f;
    m.n_fr = g.n_fr;
    return m;
  }
};

/// Achieved acceleration: total voxels over acquired voxels. n_f cancels, so
/// the value is well defined even for masks loaded from file (n_f unknown).
inline double acceleration_rate(const SamplingMask& mask) {
  const Index sampled = mask.sampled_line_count();
  if (sampled == 0)
    throw ParameterError("acceleration_rate: mask has no sampled lines");
  return double(mask.n_p) * double(mask.n_fr) / double(sampled);
}

/// Random Cartesian mask: navigator rows always on, plus
/// round(n_p/target_rate) - nu extra lines per frame drawn uniformly without
/// replacement from the non-navigator rows, independently per frame.
inline SamplingMask generate_cartesian_mask(const FrameGeometry& g, Index nu,
                                            double target_rate, std::uint64_t seed) {
  g.validate();
  if (nu < 0 || nu > g.n_p)
    throw ParameterError("generate_cartesian_mask: nu=" + std::to_string(nu) +
                         " out of range [0," + std::to_string(g.n_p) + "]");
  if (!(target_rate >= 1.0))
    throw ParameterError("generate_cartesian_mask: target_rate must be >= 1");

  const long budget = std::lround(double(g.n_p) / target_rate);
  long extra = budget - nu;
  if (extra < 0)
    throw ParameterError("generate_cartesian_mask: infeasible budget, " +
                         std::to_string(nu) + " navigator lines already exceed " +
                         std::to_string(budget) + " lines/frame at rate " +
                         std::to_string(target_rate));
  extra = std::min<long>(extra, g.n_p - nu);
  if (nu == 0 && extra == 0)
    throw ParameterError("generate_cartesian_mask: budget selects no lines per frame");

  SamplingMask mask;
  mask.lines.setZero(g.n_p, g.n_fr);
  mask.nu = nu;
  mask.n_p = g.n_p;
  mask.n_f = g.n_f;
  mask.n_fr = g.n_fr;

  const Index nav0 = navigator_row_begin(g.n_p, nu);
  std::vector<Index> candidates;
  for (Index j = 0; j < g.n_fr; ++j) {
    for (Index r = nav0; r < nav0 + nu; ++r) mask.lines(r, j) = 1;

    candidates.clear();
    for (Index r = 0; r < g.n_p; ++r)
      if (r < nav0 || r >= nav0 + nu) candidates.push_back(r);

    // Partial Fisher-Yates: the first `extra` entries are the draw.
    SplitMix64 rng = frame_stream(seed, std::uint64_t(j));
    for (long k = 0; k < extra; ++k) {
      const std::uint64_t pick =
          k + rng.next_below(std::uint64_t(candidates.size() - k));
      std::swap(candidates[k], candidates[pick]);
      mask.lines(candidates[k], j) = 1;
    }
  }
  return mask;
}

inline void check_mask_geometry(const SamplingMask& mask, const FrameGeometry& g) {
  if (mask.n_p != g.n_p || mask.n_fr != g.n_fr ||
      (mask.n_f != 0 && mask.n_f != g.n_f))
    throw DimensionError("sampling: mask geometry " + std::to_string(mask.n_p) + "x" +
                         std::to_string(mask.n_f) + "x" + std::to_string(mask.n_fr) +
                         " does not match data " + g.to_string());
}

/// Applies S to an n_k x n_fr matrix in place: rows of unsampled phase lines
/// become exactly zero.
inline void apply_sampling_inplace(const SamplingMask& mask, ComplexMatrix& y,
                                   const FrameGeometry& g) {
  check_mask_geometry(mask, g);
  if (y.rows() != g.n_k() || y.cols() != g.n_fr)
    throw DimensionError("apply_sampling: data shape does not match geometry");
  for (Index j = 0; j < g.n_fr; ++j) {
    Eigen::Map<ComplexMatrix> frame(y.col(j).data(), g.n_p, g.n_f);
    for (Index r = 0; r < g.n_p; ++r)
      if (!mask.lines(r, j)) frame.row(r).setZero();
  }
}

inline KTDataset apply_sampling(const SamplingMask& mask, const KTDataset& data) {
  const FrameGeometry& g = data.geometry();
  ComplexMatrix y = data.cube.matrix();
  apply_sampling_inplace(mask, y, g);
  return KTDataset{ComplexCube::from_matrix(g.n_p, g.n_f, std::move(y))};
}

}  // namespace kblm
