#pragma once

// Landmark selection: farthest-first (min-max) traversal over the navigator
// columns under the complex Euclidean distance.
//
// Deterministic rules: the seed is the column of maximal norm (ties: lowest
// index); each step adds the column maximizing the minimum distance to the
// selected set (ties: lowest index). Comparisons use squared distances, which
// preserves order and ties exactly.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "kblm/dataset.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct LandmarkSet {
  std::vector<Index> indices;          // strictly increasing
  std::vector<Index> selection_order;  // indices in the order they were picked
  ComplexMatrix matrix;                // nu*n_f x N_l, column k = Y_nav col indices[k]
};

inline LandmarkSet select_landmarks_minmax(const NavigatorMatrix& nav, Index count) {
  const ComplexMatrix& y = nav.entries;
  const Index n = y.cols();
  if (count < 1 || count > n)
    throw ParameterError("select_landmarks_minmax: count=" + std::to_string(count) +
                         " out of range [1," + std::to_string(n) + "]");

  std::vector<Index> order;
  order.reserve(std::size_t(count));

  Index seed = 0;
  double best = -1.0;
  for (Index j = 0; j < n; ++j) {
    const double norm2 = y.col(j).squaredNorm();
    if (norm2 > best) {
      best = norm2;
      seed = j;
    }
  }
  order.push_back(seed);

  std::vector<double> min_d2(std::size_t(n), std::numeric_limits<double>::infinity());
  std::vector<char> selected(std::size_t(n), 0);
  selected[std::size_t(seed)] = 1;
  Index last = seed;
  while (Index(order.size()) < count) {
    Index pick = -1;
    double pick_d2 = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (selected[std::size_t(j)]) continue;
      const double d2 = (y.col(j) - y.col(last)).squaredNorm();
      if (d2 < min_d2[std::size_t(j)]) min_d2[std::size_t(j)] = d2;
      if (min_d2[std::size_t(j)] > pick_d2) {
        pick_d2 = min_d2[std::size_t(j)];
        pick = j;
      }
    }
    selected[std::size_t(pick)] = 1;
    order.push_back(pick);
    last = pick;
  }

  LandmarkSet out;
  out.selection_order = order;
  out.indices = order;
  std::sort(out.indices.begin(), out.indices.end());
  out.matrix.resize(y.rows(), count);
  for (Index k = 0; k < count; ++k) out.matrix.col(k) = y.col(out.indices[std::size_t(k)]);
  return out;
}

/// Default landmark count when the caller does not pin one.
inline Index default_landmark_count(Index n_fr) {
  return std::min<Index>(50, (n_fr + 2) / 3);
}

}  // namespace kblm
