#pragma once

// Synthetic dynamic phantom: a static background ellipse plus a periodically
// beating ellipse, with a smooth spatial phase ramp so the data are genuinely
// complex. Frame t equals frame (t mod n_phases) bitwise, which gives the
// series an exactly periodic temporal structure and a low-dimensional state
// manifold.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kblm/dataset.hpp"
#include "kblm/rng.hpp"
#include "kblm/types.hpp"

namespace kblm {

struct PhantomSpec {
  FrameGeometry geom;
  Index n_cycles = 2;   // nominal motion cycles covered by the series
  Index n_phases = 24;  // distinct states; frames repeat with this period
  std::uint64_t seed = 0;
  double background_intensity = 0.35;  // in [0, 1]
  double dynamic_intensity = 0.55;     // in [0, 1], background + dynamic <= 1
  double phase_amplitude = 0.5;        // radians across the field of view

  void validate() const {
    geom.validate();
    if (n_cycles < 1 || n_phases < 1)
      throw ParameterError("PhantomSpec: n_cycles and n_phases must be >= 1");
    if (background_intensity < 0.0 || background_intensity > 1.0 ||
        dynamic_intensity < 0.0 || dynamic_intensity > 1.0)
      throw ParameterError("PhantomSpec: intensities must lie in [0, 1]");
    if (background_intensity + dynamic_intensity > 1.0)
      throw ParameterError("PhantomSpec: intensities must sum to at most 1");
  }
};

namespace detail {

// 1 inside, 0 outside, smoothstep over a thin boundary band (in units of the
// normalized elliptic radius).
inline double smooth_ellipse(double dx, double dy, double ax, double ay) {
  const double r = std::sqrt((dx / ax) * (dx / ax) + (dy / ay) * (dy / ay));
  constexpr double kEdge = 0.12;
  const double t = std::min(1.0, std::max(0.0, (1.0 - r) / kEdge));
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace detail

inline ImageSeries generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  const FrameGeometry& g = spec.geom;

  // One-off deterministic jitter so different seeds give different anatomy.
  SplitMix64 rng(spec.seed);
  const double jx = (rng.next_double() - 0.5) * 0.06;
  const double jy = (rng.next_double() - 0.5) * 0.06;
  const double tilt = (rng.next_double() - 0.5) * 0.4;

  const double bg_cx = 0.0 + jx * 0.5, bg_cy = 0.0 + jy * 0.5;
  const double bg_ax = 0.42, bg_ay = 0.36;
  const double dyn_cx = 0.10 + jx, dyn_cy = -0.06 + jy;
  const double dyn_ax = 0.16, dyn_ay = 0.12;
  constexpr double kOscillation = 0.30;  // fractional radius swing

  const Index period = std::min<Index>(spec.n_phases, g.n_fr);
  std::vector<ComplexMatrix> states(period);
  for (Index p = 0; p < period; ++p) {
    const double swing =
        1.0 + kOscillation * std::sin(2.0 * std::numbers::pi * double(p) /
                                      double(spec.n_phases));
    ComplexMatrix frame(g.n_p, g.n_f);
    for (Index c = 0; c < g.n_f; ++c) {
      const double x = (double(c) + 0.5) / double(g.n_f) - 0.5;
      for (Index r = 0; r < g.n_p; ++r) {
        const double y = (double(r) + 0.5) / double(g.n_p) - 0.5;
        double mag = spec.background_intensity *
                     detail::smooth_ellipse(x - bg_cx, y - bg_cy, bg_ax, bg_ay);
        mag += spec.dynamic_intensity *
               detail::smooth_ellipse(x - dyn_cx, y - dyn_cy, dyn_ax * swing,
                                      dyn_ay * swing);
        const double phase = spec.phase_amplitude * ((1.0 + tilt) * x + (1.0 - tilt) * y);
        frame(r, c) = std::polar(mag, phase);
      }
    }
    states[p] = std::move(frame);
  }

  ImageSeries series{ComplexCube(g.n_p, g.n_f, g.n_fr)};
  // t % n_phases < period always: either period == n_phases, or the series is
  // shorter than one cycle and t itself stays below period.
  for (Index t = 0; t < g.n_fr; ++t)
    series.cube.frame(t) = states[t % spec.n_phases];
  return series;
}

}  // namespace kblm
