#pragma once

// Reconstruction quality metrics: global and frame-wise NRMSE, pixelwise
// error maps and the zero-filled baseline.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kblm/dataset.hpp"
#include "kblm/sampling.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct EvalReport {
  double global_nrmse = 0.0;
  std::vector<std::pair<Index, double>> framewise;  // valid frames only
  std::vector<Index> flagged;                       // zero-norm reference frames
  double mean = 0.0;
  double std_dev = 0.0;  // population standard deviation
};

/// ||X - Xhat||_F / ||X||_F over the full cube.
inline double nrmse(const ImageSeries& reference, const ImageSeries& estimate) {
  if (reference.geometry() != estimate.geometry())
    throw DimensionError("nrmse: geometry mismatch, " + reference.geometry().to_string() +
                         " vs " + estimate.geometry().to_string());
  const double ref_norm = reference.cube.matrix().norm();
  if (ref_norm == 0.0)
    throw ParameterError("nrmse: reference series has zero norm");
  return (reference.cube.matrix() - estimate.cube.matrix()).norm() / ref_norm;
}

/// Per-frame NRMSE with per-frame normalization. Zero-norm reference frames
/// are flagged and excluded from the aggregates.
inline EvalReport framewise_nrmse(const ImageSeries& reference, const ImageSeries& estimate) {
  if (reference.geometry() != estimate.geometry())
    throw DimensionError("framewise_nrmse: geometry mismatch");
  EvalReport report;
  report.global_nrmse = nrmse(reference, estimate);
  const ComplexMatrix& x = reference.cube.matrix();
  const ComplexMatrix& xhat = estimate.cube.matrix();
  double sum = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    const double ref_norm = x.col(j).norm();
    if (ref_norm == 0.0) {
      report.flagged.push_back(j);
      continue;
    }
    const double v = (x.col(j) - xhat.col(j)).norm() / ref_norm;
    report.framewise.emplace_back(j, v);
    sum += v;
  }
  const std::size_t n = report.framewise.size();
  if (n > 0) {
    report.mean = sum / double(n);
    double sq = 0.0;
    for (const auto& [j, v] : report.framewise) sq += (v - report.mean) * (v - report.mean);
    report.std_dev = std::sqrt(sq / double(n));
  }
  return report;
}

/// Pixelwise |X - Xhat| magnitude image for one frame.
inline RealMatrix error_map(const ComplexMatrix& reference_frame,
                            const ComplexMatrix& estimate_frame) {
  if (reference_frame.rows() != estimate_frame.rows() ||
      reference_frame.cols() != estimate_frame.cols())
    throw DimensionError("error_map: frame shape mismatch");
  return (reference_frame - estimate_frame).cwiseAbs();
}

/// Frame-wise inverse transform of the zero-filled k-space.
inline ImageSeries zero_filled_baseline(const KTDataset& masked) {
  return to_image(masked);
}

/// CSV with one row per frame (flagged frames print nan) and a trailing
/// comment carrying the aggregates.
inline std::string eval_report_csv(const EvalReport& report) {
  std::string out = "frame,nrmse\n";
  char buf[64];
  std::vector<std::pair<Index, double>> rows;
  rows.reserve(report.framewise.size() + report.flagged.size());
  for (const auto& fv : report.framewise) rows.push_back(fv);
  for (Index j : report.flagged)
    rows.emplace_back(j, std::numeric_limits<double>::quiet_NaN());
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [j, v] : rows) {
    if (std::isnan(v))
      std::snprintf(buf, sizeof buf, "%lld,nan\n", static_cast<long long>(j));
    else
      std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(j), v);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "# mean=%.17g std=%.17g\n", report.mean, report.std_dev);
  out += buf;
  return out;
}

inline void write_eval_report(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("write_eval_report: cannot open '" + path.string() + "'");
  const std::string csv = eval_report_csv(report);
  out.write(csv.data(), std::streamsize(csv.size()));
  if (!out)
    throw IoError("write_eval_report: write failed for '" + path.string() + "'");
}

}  // namespace kblm
