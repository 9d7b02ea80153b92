#include <catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "kblm/io.hpp"
#include "kblm/phantom.hpp"
#include "kblm/sampling.hpp"

using namespace kblm;

namespace {

std::mt19937_64 rng(4242);

ComplexMatrix random_matrix(Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = Complex(dist(rng), dist(rng));
  return m;
}

PhantomSpec small_spec() {
  PhantomSpec spec;
  spec.geom = {16, 16, 12};
  spec.n_phases = 4;
  spec.n_cycles = 3;
  spec.seed = 11;
  return spec;
}

}  // namespace

TEST_CASE("phantom generation is deterministic and periodic") {
  const PhantomSpec spec = small_spec();
  ImageSeries a = generate_phantom(spec);
  ImageSeries b = generate_phantom(spec);
  CHECK((a.cube.matrix() - b.cube.matrix()).norm() == 0.0);

  // Exact periodicity: frame t equals frame t + n_phases bitwise.
  for (Index t = 0; t + spec.n_phases < spec.geom.n_fr; ++t)
    CHECK((a.cube.matrix().col(t) - a.cube.matrix().col(t + spec.n_phases)).norm() == 0.0);

  CHECK(a.cube.matrix().cwiseAbs().maxCoeff() <= 1.0);
  CHECK(a.cube.matrix().cwiseAbs().maxCoeff() > 0.0);

  // Different seeds move the anatomy.
  PhantomSpec other = spec;
  other.seed = 12;
  CHECK((generate_phantom(other).cube.matrix() - a.cube.matrix()).norm() > 0.0);

  PhantomSpec bad = spec;
  bad.geom.n_p = 0;
  CHECK_THROWS_AS(generate_phantom(bad), ParameterError);
  bad = spec;
  bad.background_intensity = 0.8;
  bad.dynamic_intensity = 0.5;
  CHECK_THROWS_AS(generate_phantom(bad), ParameterError);
}

TEST_CASE("phantom frames actually move within a cycle") {
  ImageSeries series = generate_phantom(small_spec());
  CHECK((series.cube.matrix().col(0) - series.cube.matrix().col(1)).norm() > 1e-6);
}

TEST_CASE("cartesian mask meets the budget arithmetic") {
  // nu=0, 2 lines per frame out of 8 -> rate 4 exactly.
  SamplingMask m = generate_cartesian_mask({8, 8, 4}, 0, 4.0, 5);
  for (Index j = 0; j < 4; ++j) {
    Index count = 0;
    for (Index r = 0; r < 8; ++r) count += m.lines(r, j);
    CHECK(count == 2);
  }
  CHECK(acceleration_rate(m) == 4.0);

  // Navigator lines alone exhaust the budget.
  SamplingMask nav_only = generate_cartesian_mask({8, 8, 4}, 2, 4.0, 5);
  CHECK(nav_only.sampled_line_count() == 2 * 4);
  CHECK(acceleration_rate(nav_only) == 4.0);
  for (Index j = 0; j < 4; ++j) {
    CHECK(nav_only.lines(3, j) == 1);
    CHECK(nav_only.lines(4, j) == 1);
  }

  CHECK_THROWS_AS(generate_cartesian_mask({8, 8, 4}, 4, 16.0, 5), ParameterError);
  CHECK_THROWS_AS(generate_cartesian_mask({8, 8, 4}, 0, 0.5, 5), ParameterError);
  CHECK_THROWS_AS(generate_cartesian_mask({8, 8, 4}, 0, 32.0, 5), ParameterError);
}

TEST_CASE("cartesian mask determinism and seed sensitivity") {
  SamplingMask a = generate_cartesian_mask({32, 16, 6}, 4, 4.0, 7);
  SamplingMask b = generate_cartesian_mask({32, 16, 6}, 4, 4.0, 7);
  CHECK((a.lines.cast<int>() - b.lines.cast<int>()).cwiseAbs().sum() == 0);

  SamplingMask c = generate_cartesian_mask({32, 16, 6}, 4, 4.0, 8);
  CHECK((a.lines.cast<int>() - c.lines.cast<int>()).cwiseAbs().sum() > 0);
}

TEST_CASE("mask navigator rows are always on and rate is within one line") {
  for (int trial = 0; trial < 20; ++trial) {
    const Index n_p = 16 + Index(rng() % 48);
    const Index n_fr = 2 + Index(rng() % 8);
    const Index nu = Index(rng() % 5);
    const double rate = 2.0 + double(rng() % 70) / 10.0;
    const long budget = std::lround(double(n_p) / rate);
    if (budget - nu < 0 || (nu == 0 && budget == 0)) continue;

    SamplingMask m = generate_cartesian_mask({n_p, 8, n_fr}, nu, rate, trial);
    const Index nav0 = navigator_row_begin(n_p, nu);
    for (Index j = 0; j < n_fr; ++j)
      for (Index r = nav0; r < nav0 + nu; ++r) CHECK(m.lines(r, j) == 1);

    // Achieved rate within one line per frame of the target.
    const double lines_per_frame = double(m.sampled_line_count()) / double(n_fr);
    const double target_lines = double(n_p) / rate;
    CHECK(std::abs(lines_per_frame - target_lines) <= 1.0);
    CHECK(acceleration_rate(m) > 0.0);
  }
}

TEST_CASE("apply_sampling is the zero-filling restriction") {
  const FrameGeometry g{6, 5, 3};
  KTDataset data{ComplexCube::from_matrix(6, 5, random_matrix(30, 3))};

  SamplingMask full = SamplingMask::full(g, 2);
  CHECK((apply_sampling(full, data).cube.matrix() - data.cube.matrix()).norm() == 0.0);

  SamplingMask m = generate_cartesian_mask(g, 2, 2.0, 3);
  KTDataset once = apply_sampling(m, data);
  KTDataset twice = apply_sampling(m, once);
  CHECK((once.cube.matrix() - twice.cube.matrix()).norm() == 0.0);

  for (Index j = 0; j < 3; ++j)
    for (Index r = 0; r < 6; ++r) {
      if (!m.lines(r, j))
        CHECK(once.cube.frame(j).row(r).norm() == 0.0);
      else
        CHECK((once.cube.frame(j).row(r) - data.cube.frame(j).row(r)).norm() == 0.0);
    }

  KTDataset wrong{ComplexCube::from_matrix(5, 5, random_matrix(25, 3))};
  CHECK_THROWS_AS(apply_sampling(m, wrong), DimensionError);
}

TEST_CASE("apply_sampling is linear and self-adjoint") {
  const FrameGeometry g{8, 4, 2};
  SamplingMask m = generate_cartesian_mask(g, 2, 2.0, 9);
  ComplexMatrix y = random_matrix(32, 2), y2 = random_matrix(32, 2);

  ComplexMatrix sy = y, sy2 = y2;
  apply_sampling_inplace(m, sy, g);
  apply_sampling_inplace(m, sy2, g);

  // linearity
  ComplexMatrix combo = 2.0 * y + Complex(0, 1) * y2;
  apply_sampling_inplace(m, combo, g);
  CHECK((combo - (2.0 * sy + Complex(0, 1) * sy2)).norm() <= 1e-12 * combo.norm());

  // self-adjointness: <S(y), y2> == <y, S(y2)>
  const Complex lhs = (sy.conjugate().array() * y2.array()).sum();
  const Complex rhs = (y.conjugate().array() * sy2.array()).sum();
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
}

TEST_CASE("acceleration_rate of full and empty masks") {
  SamplingMask full = SamplingMask::full({8, 8, 4}, 0);
  CHECK(acceleration_rate(full) == 1.0);

  SamplingMask empty;
  empty.lines.setZero(8, 4);
  empty.n_p = 8;
  empty.n_f = 8;
  empty.n_fr = 4;
  CHECK_THROWS_AS(acceleration_rate(empty), ParameterError);
}

TEST_CASE("mask file round trip and validation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "kblm_acquisition_tests";
  fs::create_directories(dir);
  const fs::path path = dir / "mask.kblmmask";

  SamplingMask m = generate_cartesian_mask({16, 8, 5}, 4, 4.0, 21);
  write_mask(path, m);
  SamplingMask r = read_mask(path);
  CHECK(r.n_p == 16);
  CHECK(r.n_f == 0);  // format carries no n_f
  CHECK(r.n_fr == 5);
  CHECK(r.nu == 4);
  CHECK((r.lines.cast<int>() - m.lines.cast<int>()).cwiseAbs().sum() == 0);

  // A loaded mask applies to data of any n_f.
  KTDataset data{ComplexCube::from_matrix(16, 3, random_matrix(48, 5))};
  KTDataset masked = apply_sampling(r, data);
  CHECK(masked.cube.matrix().norm() > 0.0);

  // Violated navigator invariant is rejected on read.
  SamplingMask broken = m;
  broken.lines(navigator_row_begin(16, 4), 2) = 0;
  const fs::path bad = dir / "bad.kblmmask";
  write_mask(bad, broken);
  CHECK_THROWS_AS(read_mask(bad), ValidationError);
}
