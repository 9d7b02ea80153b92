#pragma once

// The bi-linear recovery task and its successive-convex-approximation solver.
//
// Unknowns: the image-domain dictionary D (n_k x d, columns capped at c_d),
// the affine blending coefficients B (N_l x n_fr, columns summing to 1) and
// the temporal-spectrum auxiliary Z (n_k x n_fr). With F the centered
// frame-wise Fourier map, F_t the per-pixel temporal DFT, S the sampling
// restriction and Kc the reduced kernel, the objective is
//
//   1/2 ||S(Y) - S F(D Kc B)||_F^2 + lambda1/2 ||Z - F_t(D Kc B)||_F^2
//     + lambda2 ||B||_1 + lambda3 ||Z||_1.
//
// The outer loop solves one convex subproblem per block from the same
// incumbent (Jacobi style) and blends the solutions with the diminishing
// step gamma_{n+1} = gamma_n (1 - zeta gamma_n):
//   D-subproblem: accelerated projected gradient over per-column balls,
//   B-subproblem: forward-backward splitting whose two prox pieces are the
//                 entrywise complex soft-threshold and the column-sum-one
//                 hyperplane projection,
//   Z-update:     exact entrywise soft-threshold at lambda3/lambda1.
// Both subproblem solvers return the best feasible iterate they saw, so the
// reported solution never has a larger subproblem objective than the
// incumbent.

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kblm/dataset.hpp"
#include "kblm/kernels.hpp"
#include "kblm/landmarks.hpp"
#include "kblm/manifold.hpp"
#include "kblm/power.hpp"
#include "kblm/prox.hpp"
#include "kblm/sampling.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct ReconConfig {
  double lambda1 = 0.5;  // weight of the Z coupling term
  double lambda2 = 0.0;  // B sparsity; <= 0: 1e-3 ||S(Y)||_F / sqrt(N_l n_fr)
  double lambda3 = 0.0;  // Z sparsity; <= 0: 1e-3 ||S(Y)||_F / sqrt(n_k n_fr)
  double c_d = 0.0;      // dictionary column cap; <= 0: 10x the unclipped init fit
  double tau_d = 1e-2;   // proximal weight of the D-subproblem
  double tau_b = 1e-2;   // proximal weight of the B-subproblem
  double zeta = 0.5;     // gamma shrink factor, in (0,1)
  double gamma0 = 1.0;   // initial step, in (0,1]
  int outer_max_iter = 300;
  int inner_max_iter = 200;
  double outer_tol = 1e-4;  // relative change of the reconstruction D Kc B
  double inner_tol = 1e-5;  // relative iterate change inside the subproblems

  // Requires the auto fields to be resolved already.
  void validate() const {
    if (lambda1 <= 0.0 || lambda2 <= 0.0 || lambda3 <= 0.0)
      throw ParameterError("ReconConfig: lambda1, lambda2, lambda3 must be positive");
    if (c_d <= 0.0) throw ParameterError("ReconConfig: c_d must be positive");
    if (tau_d <= 0.0 || tau_b <= 0.0)
      throw ParameterError("ReconConfig: tau_d and tau_b must be positive");
    if (zeta <= 0.0 || zeta >= 1.0)
      throw ParameterError("ReconConfig: zeta must lie in (0,1)");
    if (gamma0 <= 0.0 || gamma0 > 1.0)
      throw ParameterError("ReconConfig: gamma0 must lie in (0,1]");
    if (outer_max_iter < 1 || inner_max_iter < 1)
      throw ParameterError("ReconConfig: iteration caps must be >= 1");
    if (outer_tol <= 0.0 || inner_tol <= 0.0)
      throw ParameterError("ReconConfig: tolerances must be positive");
  }
};

struct ReconProblem {
  ComplexMatrix data;           // S(Y), n_k x n_fr, centered k-space
  SamplingMask mask;
  ComplexMatrix reduced_kernel; // Kc, d x N_l
  FrameGeometry geom;
  ReconConfig cfg;              // fully resolved
};

struct ReconState {
  ComplexMatrix dictionary;        // D, n_k x d
  ComplexMatrix coefficients;      // B, N_l x n_fr
  ComplexMatrix temporal_spectrum; // Z, n_k x n_fr
  double gamma = 1.0;
  int iteration = 0;
};

struct SubproblemResult {
  ComplexMatrix solution;
  int iterations = 0;
  double objective_before = 0.0;  // subproblem objective at the incumbent
  double objective_after = 0.0;   // at the returned solution
};

struct StepDiagnostics {
  double gamma_next = 0.0;
  SubproblemResult dictionary;
  SubproblemResult coefficients;
};

namespace detail {

struct ForwardMaps {
  ComplexMatrix kspace;    // F(P)
  ComplexMatrix temporal;  // F_t(P)
};

inline ForwardMaps forward_maps(const ComplexMatrix& image_product, const FrameGeometry& g) {
  return ForwardMaps{to_kspace_matrix(image_product, g), dft_time(image_product)};
}

// 1/2 ||S(F(P)) - data||^2 given the unmasked forward maps.
inline double data_fidelity(const ForwardMaps& fw, const ReconProblem& p) {
  ComplexMatrix r = fw.kspace;
  apply_sampling_inplace(p.mask, r, p.geom);
  r -= p.data;
  return 0.5 * r.squaredNorm();
}

inline void check_state_shapes(const ReconState& s, const ReconProblem& p) {
  const Index d = p.reduced_kernel.rows();
  const Index n_l = p.reduced_kernel.cols();
  if (s.dictionary.rows() != p.geom.n_k() || s.dictionary.cols() != d ||
      s.coefficients.rows() != n_l || s.coefficients.cols() != p.geom.n_fr ||
      s.temporal_spectrum.rows() != p.geom.n_k() ||
      s.temporal_spectrum.cols() != p.geom.n_fr)
    throw DimensionError("recon: state shapes do not match the problem");
  if (p.data.rows() != p.geom.n_k() || p.data.cols() != p.geom.n_fr)
    throw DimensionError("recon: data shape does not match the geometry");
}

}  // namespace detail

/// The reconstruction D Kc B implied by a state.
inline ComplexMatrix reconstruction(const ReconState& s, const ReconProblem& p) {
  return s.dictionary * (p.reduced_kernel * s.coefficients);
}

/// Full objective T1 + T2 + T3 + T4.
inline double objective(const ReconState& s, const ReconProblem& p) {
  detail::check_state_shapes(s, p);
  const detail::ForwardMaps fw = detail::forward_maps(reconstruction(s, p), p.geom);
  const double t1 = detail::data_fidelity(fw, p);
  const double t2 = 0.5 * p.cfg.lambda1 * (s.temporal_spectrum - fw.temporal).squaredNorm();
  const double t3 = p.cfg.lambda2 * l1_norm(s.coefficients);
  const double t4 = p.cfg.lambda3 * l1_norm(s.temporal_spectrum);
  return t1 + t2 + t3 + t4;
}

/// Objective of the D-subproblem (Z and B fixed at the incumbent).
inline double dictionary_subobjective(const ComplexMatrix& d, const ReconState& incumbent,
                                      const ReconProblem& p) {
  const ComplexMatrix m = p.reduced_kernel * incumbent.coefficients;
  const detail::ForwardMaps fw = detail::forward_maps(d * m, p.geom);
  return detail::data_fidelity(fw, p) +
         0.5 * p.cfg.lambda1 * (incumbent.temporal_spectrum - fw.temporal).squaredNorm() +
         0.5 * p.cfg.tau_d * (d - incumbent.dictionary).squaredNorm();
}

/// Objective of the B-subproblem, including its l1 term.
inline double coefficient_subobjective(const ComplexMatrix& b, const ReconState& incumbent,
                                       const ReconProblem& p) {
  const ComplexMatrix g = incumbent.dictionary * p.reduced_kernel;
  const detail::ForwardMaps fw = detail::forward_maps(g * b, p.geom);
  return detail::data_fidelity(fw, p) +
         0.5 * p.cfg.lambda1 * (incumbent.temporal_spectrum - fw.temporal).squaredNorm() +
         0.5 * p.cfg.tau_b * (b - incumbent.coefficients).squaredNorm() +
         p.cfg.lambda2 * l1_norm(b);
}

/// Gradient of the smooth D-subproblem objective at `d`. Satisfies
/// f(d + h) = f(d) + Re<grad, h> + O(h^2).
inline ComplexMatrix dictionary_gradient(const ComplexMatrix& d, const ReconState& incumbent,
                                         const ReconProblem& p) {
  const ComplexMatrix m = p.reduced_kernel * incumbent.coefficients;
  const detail::ForwardMaps fw = detail::forward_maps(d * m, p.geom);
  ComplexMatrix rk = fw.kspace;
  apply_sampling_inplace(p.mask, rk, p.geom);
  rk -= p.data;
  const ComplexMatrix rt = fw.temporal - incumbent.temporal_spectrum;
  return (to_image_matrix(rk, p.geom) + p.cfg.lambda1 * idft_time(rt)) * m.adjoint() +
         p.cfg.tau_d * (d - incumbent.dictionary);
}

/// Gradient of the smooth part of the B-subproblem objective at `b`.
inline ComplexMatrix coefficient_gradient(const ComplexMatrix& b, const ReconState& incumbent,
                                          const ReconProblem& p) {
  const ComplexMatrix g = incumbent.dictionary * p.reduced_kernel;
  const detail::ForwardMaps fw = detail::forward_maps(g * b, p.geom);
  ComplexMatrix rk = fw.kspace;
  apply_sampling_inplace(p.mask, rk, p.geom);
  rk -= p.data;
  const ComplexMatrix rt = fw.temporal - incumbent.temporal_spectrum;
  return g.adjoint() * (to_image_matrix(rk, p.geom) + p.cfg.lambda1 * idft_time(rt)) +
         p.cfg.tau_b * (b - incumbent.coefficients);
}

/// Accelerated projected gradient for the D-subproblem. Returns the best
/// feasible iterate; the incumbent is the start, so the result never exceeds
/// the incumbent's subproblem objective.
inline SubproblemResult solve_dictionary(const ReconState& incumbent, const ReconProblem& p) {
  detail::check_state_shapes(incumbent, p);
  const ComplexMatrix m = p.reduced_kernel * incumbent.coefficients;
  const ComplexMatrix mh = m.adjoint();
  const double lip = (1.0 + p.cfg.lambda1) * operator_norm_sq(m) + p.cfg.tau_d;
  const double step = 1.0 / lip;

  const ComplexMatrix& d_n = incumbent.dictionary;
  const ComplexMatrix& z_n = incumbent.temporal_spectrum;

  auto eval = [&](const ComplexMatrix& d, const detail::ForwardMaps& fw) {
    return detail::data_fidelity(fw, p) +
           0.5 * p.cfg.lambda1 * (z_n - fw.temporal).squaredNorm() +
           0.5 * p.cfg.tau_d * (d - d_n).squaredNorm();
  };

  ComplexMatrix x_prev = d_n, x = d_n;
  detail::ForwardMaps fw_prev = detail::forward_maps(d_n * m, p.geom);
  detail::ForwardMaps fw = fw_prev;

  SubproblemResult out;
  out.objective_before = eval(d_n, fw);
  out.solution = d_n;
  out.objective_after = out.objective_before;

  double t = 1.0;
  double momentum = 0.0;
  for (int k = 1; k <= p.cfg.inner_max_iter; ++k) {
    const ComplexMatrix y = x + momentum * (x - x_prev);
    ComplexMatrix rk = (1.0 + momentum) * fw.kspace - momentum * fw_prev.kspace;
    apply_sampling_inplace(p.mask, rk, p.geom);
    rk -= p.data;
    const ComplexMatrix rt =
        (1.0 + momentum) * fw.temporal - momentum * fw_prev.temporal - z_n;

    ComplexMatrix x_new =
        y - step * ((to_image_matrix(rk, p.geom) + p.cfg.lambda1 * idft_time(rt)) * mh +
                    p.cfg.tau_d * (y - d_n));
    project_columns_ball_inplace(x_new, p.cfg.c_d);

    detail::ForwardMaps fw_new = detail::forward_maps(x_new * m, p.geom);
    const double f_new = eval(x_new, fw_new);
    if (f_new < out.objective_after) {
      out.objective_after = f_new;
      out.solution = x_new;
    }

    const double rel = (x_new - x).norm() / std::max(x.norm(), 1e-30);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    momentum = (t - 1.0) / t_next;
    t = t_next;
    x_prev = std::move(x);
    fw_prev = std::move(fw);
    x = std::move(x_new);
    fw = std::move(fw_new);
    out.iterations = k;
    if (rel <= p.cfg.inner_tol) break;
  }
  return out;
}

/// Accelerated forward-backward splitting for the B-subproblem: gradient step
/// on the smooth part, entrywise soft-threshold, column-sum-one projection.
/// Returns the best feasible iterate (the incumbent included).
inline SubproblemResult solve_coefficients(const ReconState& incumbent, const ReconProblem& p) {
  detail::check_state_shapes(incumbent, p);
  const ComplexMatrix g = incumbent.dictionary * p.reduced_kernel;
  const ComplexMatrix gh = g.adjoint();
  const double lip = (1.0 + p.cfg.lambda1) * operator_norm_sq(g) + p.cfg.tau_b;
  const double step = 1.0 / lip;

  const ComplexMatrix& b_n = incumbent.coefficients;
  const ComplexMatrix& z_n = incumbent.temporal_spectrum;

  auto eval = [&](const ComplexMatrix& b, const detail::ForwardMaps& fw) {
    return detail::data_fidelity(fw, p) +
           0.5 * p.cfg.lambda1 * (z_n - fw.temporal).squaredNorm() +
           0.5 * p.cfg.tau_b * (b - b_n).squaredNorm() + p.cfg.lambda2 * l1_norm(b);
  };

  ComplexMatrix x_prev = b_n, x = b_n;
  detail::ForwardMaps fw_prev = detail::forward_maps(g * b_n, p.geom);
  detail::ForwardMaps fw = fw_prev;

  SubproblemResult out;
  out.objective_before = eval(b_n, fw);
  out.solution = b_n;
  out.objective_after = out.objective_before;

  double t = 1.0;
  double momentum = 0.0;
  for (int k = 1; k <= p.cfg.inner_max_iter; ++k) {
    const ComplexMatrix y = x + momentum * (x - x_prev);
    ComplexMatrix rk = (1.0 + momentum) * fw.kspace - momentum * fw_prev.kspace;
    apply_sampling_inplace(p.mask, rk, p.geom);
    rk -= p.data;
    const ComplexMatrix rt =
        (1.0 + momentum) * fw.temporal - momentum * fw_prev.temporal - z_n;

    ComplexMatrix x_new =
        y - step * (gh * (to_image_matrix(rk, p.geom) + p.cfg.lambda1 * idft_time(rt)) +
                    p.cfg.tau_b * (y - b_n));
    soft_threshold_inplace(x_new, step * p.cfg.lambda2);
    project_colsum_one_inplace(x_new);

    detail::ForwardMaps fw_new = detail::forward_maps(g * x_new, p.geom);
    const double m_new = eval(x_new, fw_new);
    if (m_new < out.objective_after) {
      out.objective_after = m_new;
      out.solution = x_new;
    }

    const double rel = (x_new - x).norm() / std::max(x.norm(), 1e-30);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    momentum = (t - 1.0) / t_next;
    t = t_next;
    x_prev = std::move(x);
    fw_prev = std::move(fw);
    x = std::move(x_new);
    fw = std::move(fw_new);
    out.iterations = k;
    if (rel <= p.cfg.inner_tol) break;
  }
  return out;
}

/// Exact Z-update: entrywise soft-threshold of F_t(D Kc B) at lambda3/lambda1.
inline ComplexMatrix threshold_temporal(const ReconState& incumbent, const ReconProblem& p) {
  if (p.cfg.lambda1 <= 0.0)
    throw ParameterError("threshold_temporal: lambda1 must be positive");
  detail::check_state_shapes(incumbent, p);
  ComplexMatrix a = dft_time(reconstruction(incumbent, p));
  soft_threshold_inplace(a, p.cfg.lambda3 / p.cfg.lambda1);
  return a;
}

// Weight of the one-hot component in the initial coefficients. A purely
// uniform start makes Kc*B0 rank one and the least-squares dictionary fit
// degenerate, which leaves the subproblems too ill-conditioned to move; the
// blend keeps B0 feasible while giving the init full temporal rank.
inline constexpr double kInitOneHotWeight = 0.5;

/// Self-contained initial coefficients: uniform columns blended with a cyclic
/// landmark assignment (frame j -> landmark j mod N_l). Columns sum to one.
inline ComplexMatrix default_initial_coefficients(Index n_l, Index n_fr) {
  ComplexMatrix b = ComplexMatrix::Constant(
      n_l, n_fr, Complex((1.0 - kInitOneHotWeight) / double(n_l), 0.0));
  for (Index j = 0; j < n_fr; ++j)
    b(j % n_l, j) += Complex(kInitOneHotWeight, 0.0);
  return b;
}

/// Data-driven initial coefficients: each frame's one-hot component points at
/// its nearest landmark (Euclidean distance between navigator columns; ties
/// to the lowest landmark index).
inline ComplexMatrix nearest_landmark_coefficients(const NavigatorMatrix& nav,
                                                   const LandmarkSet& landmarks) {
  const Index n_l = landmarks.matrix.cols();
  const Index n_fr = nav.entries.cols();
  ComplexMatrix b = ComplexMatrix::Constant(
      n_l, n_fr, Complex((1.0 - kInitOneHotWeight) / double(n_l), 0.0));
  for (Index j = 0; j < n_fr; ++j) {
    Index best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n_l; ++k) {
      const double d2 = (nav.entries.col(j) - landmarks.matrix.col(k)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = k;
      }
    }
    b(best, j) += Complex(kInitOneHotWeight, 0.0);
  }
  return b;
}

namespace detail {

// Regularized least-squares dictionary fit to the zero-filled images given
// initial coefficients.
inline ComplexMatrix initial_dictionary_fit(const ReconProblem& p, const ComplexMatrix& b0) {
  const Index d = p.reduced_kernel.rows();
  const ComplexMatrix m0 = p.reduced_kernel * b0;
  const ComplexMatrix x_zf = to_image_matrix(p.data, p.geom);
  const ComplexMatrix gram = m0 * m0.adjoint() + 1e-8 * ComplexMatrix::Identity(d, d);
  return gram.ldlt().solve((x_zf * m0.adjoint()).adjoint()).adjoint();
}

}  // namespace detail

/// Column cap used when cfg.c_d is left on auto: 10x the largest column norm
/// of the unclipped least-squares dictionary fit to the zero-filled images.
inline double auto_column_cap(const ReconProblem& p, const ComplexMatrix* b0 = nullptr) {
  const ComplexMatrix coeffs =
      b0 ? *b0 : default_initial_coefficients(p.reduced_kernel.cols(), p.geom.n_fr);
  const ComplexMatrix d0 = detail::initial_dictionary_fit(p, coeffs);
  double cap = 0.0;
  for (Index c = 0; c < d0.cols(); ++c) cap = std::max(cap, d0.col(c).norm());
  return cap > 0.0 ? 10.0 * cap : 1.0;
}

/// Deterministic start per the "arbitrarily fix (D0, B0, Z0)" step: blended
/// feasible coefficients (see above), a regularized least-squares dictionary
/// fit to the zero-filled images with columns clipped to the cap, and the
/// implied temporal spectrum.
inline ReconState init_state(const ReconProblem& p, const ComplexMatrix* b0 = nullptr) {
  p.cfg.validate();
  const Index n_l = p.reduced_kernel.cols();

  ReconState s;
  s.coefficients = b0 ? *b0 : default_initial_coefficients(n_l, p.geom.n_fr);
  if (s.coefficients.rows() != n_l || s.coefficients.cols() != p.geom.n_fr)
    throw DimensionError("init_state: initial coefficients have the wrong shape");
  project_colsum_one_inplace(s.coefficients);  // exact feasibility
  s.dictionary = detail::initial_dictionary_fit(p, s.coefficients);
  project_columns_ball_inplace(s.dictionary, p.cfg.c_d);
  s.temporal_spectrum = dft_time(s.dictionary * (p.reduced_kernel * s.coefficients));
  s.gamma = p.cfg.gamma0;
  s.iteration = 0;
  return s;
}

/// One outer iteration: gamma update, the three block solutions from the
/// same incumbent, and the convex-combination blend.
inline ReconState sca_step(const ReconState& incumbent, const ReconProblem& p,
                           StepDiagnostics* diag = nullptr) {
  const double gamma_next = incumbent.gamma * (1.0 - p.cfg.zeta * incumbent.gamma);
  SubproblemResult dict = solve_dictionary(incumbent, p);
  SubproblemResult coef = solve_coefficients(incumbent, p);
  const ComplexMatrix z_hat = threshold_temporal(incumbent, p);

  ReconState next;
  next.dictionary = (1.0 - gamma_next) * incumbent.dictionary + gamma_next * dict.solution;
  next.coefficients =
      (1.0 - gamma_next) * incumbent.coefficients + gamma_next * coef.solution;
  next.temporal_spectrum =
      (1.0 - gamma_next) * incumbent.temporal_spectrum + gamma_next * z_hat;
  next.gamma = gamma_next;
  next.iteration = incumbent.iteration + 1;

  if (diag) {
    diag->gamma_next = gamma_next;
    diag->dictionary = std::move(dict);
    diag->coefficients = std::move(coef);
  }
  return next;
}

/// Worst constraint violations of a state: {column-norm excess over c_d,
/// column-sum deviation from one}.
inline std::pair<double, double> feasibility_residuals(const ReconState& s,
                                                       const ReconConfig& cfg) {
  double cap_excess = 0.0;
  for (Index c = 0; c < s.dictionary.cols(); ++c)
    cap_excess = std::max(cap_excess, s.dictionary.col(c).norm() - cfg.c_d);
  double sum_dev = 0.0;
  for (Index c = 0; c < s.coefficients.cols(); ++c)
    sum_dev = std::max(sum_dev,
                       std::abs(s.coefficients.col(c).sum() - Complex(1.0, 0.0)));
  return {cap_excess, sum_dev};
}

struct PipelineParams {
  Index n_landmarks = 0;  // 0: min(50, ceil(n_fr/3))
  Index reduced_dim = 0;  // 0: min(8, n_landmarks - 1)
  Index nu = 4;           // navigator lines (used by callers that build masks)
  KernelSpec kernel;      // gamma <= 0: median heuristic over the landmarks
  double lambda_w = 0.0;  // <= 0: 0.1 ||K||_F / N_l
  double weights_tol = 1e-6;
  int weights_max_iter = 2000;
  ReconConfig recon;
};

struct ReconDiagnostics {
  std::vector<double> objective_trace;
  std::vector<double> gamma_trace;
  int outer_iterations = 0;
  int total_inner_iterations = 0;
  bool converged = false;
  double final_cap_excess = 0.0;
  double final_colsum_deviation = 0.0;
  // Resolved parameters actually used.
  Index n_landmarks = 0;
  Index reduced_dim = 0;
  double kernel_gamma = 0.0;
  double lambda_w = 0.0;
  ReconConfig resolved_cfg;
};

struct ReconResult {
  ImageSeries images;
  ReconDiagnostics diag;
};

/// The full recovery pipeline: landmark selection, kernel Gram matrix,
/// manifold weights, reduced kernel, then the SCA loop until the relative
/// change of D Kc B drops below outer_tol.
inline ReconResult run_reconstruction(const KTDataset& masked, const SamplingMask& mask,
                                      const NavigatorMatrix& nav,
                                      const PipelineParams& params) {
  const FrameGeometry& g = masked.geometry();
  check_mask_geometry(mask, g);
  if (nav.entries.cols() != g.n_fr)
    throw DimensionError("run_reconstruction: navigator frame count mismatch");

  const Index n_l =
      params.n_landmarks > 0 ? params.n_landmarks : default_landmark_count(g.n_fr);
  if (n_l < 2 || n_l > g.n_fr)
    throw ParameterError("run_reconstruction: landmark count " + std::to_string(n_l) +
                         " out of range [2," + std::to_string(g.n_fr) + "]");
  const Index d =
      params.reduced_dim > 0 ? params.reduced_dim : std::min<Index>(8, n_l - 1);
  if (d < 1 || d >= n_l)
    throw ParameterError("run_reconstruction: reduced dimension " + std::to_string(d) +
                         " out of range [1," + std::to_string(n_l) + ")");

  const LandmarkSet landmarks = select_landmarks_minmax(nav, n_l);
  const KernelMatrix kernel = kernel_matrix(params.kernel, landmarks.matrix);
  const WeightMatrix weights =
      solve_weights(kernel, params.lambda_w, params.weights_tol, params.weights_max_iter);
  const ReducedKernel reduced = compute_reduced_kernel(weights, d);

  ReconProblem problem;
  problem.mask = mask;
  problem.reduced_kernel = reduced.entries;
  problem.geom = g;
  problem.data = masked.cube.matrix();
  // Idempotent: guarantees the stored data is exactly S(Y).
  apply_sampling_inplace(mask, problem.data, g);

  problem.cfg = params.recon;
  const double data_norm = problem.data.norm();
  if (problem.cfg.lambda2 <= 0.0)
    problem.cfg.lambda2 = 1e-3 * data_norm / std::sqrt(double(n_l) * double(g.n_fr));
  if (problem.cfg.lambda3 <= 0.0)
    problem.cfg.lambda3 = 1e-3 * data_norm / std::sqrt(double(g.n_k()) * double(g.n_fr));
  const ComplexMatrix b0 = nearest_landmark_coefficients(nav, landmarks);
  if (problem.cfg.c_d <= 0.0) problem.cfg.c_d = auto_column_cap(problem, &b0);
  problem.cfg.validate();

  ReconState state = init_state(problem, &b0);

  ReconDiagnostics diag;
  diag.n_landmarks = n_l;
  diag.reduced_dim = d;
  diag.kernel_gamma = kernel.spec.gamma;
  diag.lambda_w = weights.lambda_w;
  diag.resolved_cfg = problem.cfg;

  ComplexMatrix recon_prev = reconstruction(state, problem);
  for (int n = 0; n < problem.cfg.outer_max_iter; ++n) {
    StepDiagnostics sd;
    state = sca_step(state, problem, &sd);
    diag.total_inner_iterations += sd.dictionary.iterations + sd.coefficients.iterations;
    diag.objective_trace.push_back(objective(state, problem));
    diag.gamma_trace.push_back(state.gamma);
    diag.outer_iterations = n + 1;

    ComplexMatrix recon_now = reconstruction(state, problem);
    const double rel =
        (recon_now - recon_prev).norm() / std::max(recon_prev.norm(), 1e-30);
    recon_prev = std::move(recon_now);
    if (rel <= problem.cfg.outer_tol) {
      diag.converged = true;
      break;
    }
  }

  const auto [cap_excess, sum_dev] = feasibility_residuals(state, problem.cfg);
  diag.final_cap_excess = cap_excess;
  diag.final_colsum_deviation = sum_dev;

  ReconResult out;
  out.images = ImageSeries{ComplexCube::from_matrix(g.n_p, g.n_f, std::move(recon_prev))};
  out.diag = std::move(diag);
  return out;
}

}  // namespace kblm
