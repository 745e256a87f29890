#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rheokin/grid_solver.hpp"

using namespace rheokin;

namespace {

ModelParams desk_params(int n_cells = 4000, double t_end = 10.0) {
  ModelParams p;
  p.n_cells = n_cells;
  p.t_end = t_end;
  return p;
}

}  // namespace

TEST_CASE("grid alignment: zero at a center, threshold on boundaries") {
  const int n = aligned_cell_count(4000, 10.0, 2.0);
  CHECK(n == 4005);
  const ModelParams p = desk_params();
  const DensityField f = init_grid(p, InitialDensity::truncated_gaussian(10.0));
  CHECK(f.n_cells() == 4005);
  CHECK(std::abs(f.center(f.zero_cell)) <= 1e-12);
  // sigma_c sits on a cell boundary: (sigma_c + m_sigma)/dsigma is an integer
  const double r = (p.sigma_c + p.m_sigma) / f.dsigma;
  CHECK(std::abs(r - std::round(r)) <= 1e-9);
  CHECK_THROWS_AS(aligned_cell_count(100, 1.0, 2.0), GeometryError);
}

TEST_CASE("init_grid samples and rescales to unit mass") {
  const ModelParams p = desk_params();
  const DensityField g = init_grid(p, InitialDensity::truncated_gaussian(10.0));
  CHECK(std::abs(g.mass() - 1.0) <= 1e-13);

  const DensityField u = init_grid(p, InitialDensity::uniform(0.0, 2.0));
  CHECK(std::abs(u.mass() - 1.0) <= 1e-13);
  int inside = 0;
  for (int i = 0; i < u.n_cells(); ++i) {
    const double c = u.center(i);
    if (c > 0.0 && c < 2.0) {
      ++inside;
      CHECK(u.p[i] == doctest::Approx(0.5).epsilon(3e-3));
    } else if (c < -0.1 || c > 2.1) {
      CHECK(u.p[i] == 0.0);
    }
  }
  CHECK(inside > 0);

  const DensityField s = init_grid(p, [](double x) { return stationary_density(x, 1.0, 2.0); });
  const Observables o = observe(s);
  CHECK(std::abs(o.fluidity - 1.0 / 3.0) <= 2.0 * s.dsigma);
}

TEST_CASE("source substep decays above-threshold cells exactly") {
  ModelParams p = desk_params(200);
  DensityField f = init_grid(p, InitialDensity::uniform(2.5, 3.5));
  const int i3 = static_cast<int>(std::llround((3.0 + f.m_sigma) / f.dsigma - 0.5));
  const double before = f.p[i3];
  const double dt = 0.125;
  step(f, dt, 0.0);
  CHECK(f.p[i3] == doctest::Approx(before * std::exp(-dt)).epsilon(1e-14));
  CHECK(std::abs(f.mass() - 1.0) <= 1e-14);
}

TEST_CASE("advection at unit CFL is a pure one-cell shift") {
  ModelParams p = desk_params(200);
  p.sigma_c = 8.0;  // park the threshold far away so the source does nothing
  DensityField f = init_grid(p, InitialDensity::uniform(-1.0, 1.0));
  const std::vector<double> before = f.p;
  const double rate = 1.0;
  step(f, f.dsigma / rate, rate);  // nu = 1
  const int n = f.n_cells();
  for (int i = 0; i < n; ++i)
    CHECK(f.p[i] == doctest::Approx(before[(i + n - 1) % n]).epsilon(1e-13));
}

TEST_CASE("step rejects CFL violations and negative rates") {
  ModelParams p = desk_params(200);
  DensityField f = init_grid(p, InitialDensity::truncated_gaussian(10.0));
  CHECK_THROWS_AS(step(f, 10.0 * f.dsigma, 1.0), CflError);
  CHECK_THROWS_AS(step(f, 0.01, -1.0), DegenerateShearError);
}

TEST_CASE("mass conserved to near machine precision across random steps") {
  ModelParams p = desk_params(1000);
  DensityField f = init_grid(p, InitialDensity::truncated_gaussian(10.0));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> urate(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double rate = urate(rng);
    const double dt = 0.9 * f.dsigma / std::max(rate, 0.1);
    step(f, dt, rate);
    CHECK(std::abs(f.mass() - 1.0) <= 1e-12);
    CHECK(f.min_value() >= 0.0);
  }
}

TEST_CASE("run respects invariants and sub-steps oversized CFL automatically") {
  ModelParams p = desk_params(1000, 2.0);
  p.dt = 0.05;  // nu ~ 2.5 at rate 1: forces sub-stepping
  const RunResult r = run(p, InitialDensity::uniform(0.0, 2.0), ShearProfile::constant(1.0));
  for (const Observables& o : r.series.samples) {
    CHECK(std::abs(o.mass - 1.0) <= 1e-10);
    CHECK(o.min_value >= 0.0);
    CHECK(o.fluidity <= 1.0 + 1e-12);
  }
  CHECK(r.final_field.time == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("time-scaled profile feeds the rate at the step start") {
  ModelParams p = desk_params(1000, 3.0);
  const ShearProfile prof = ShearProfile::time_scaled(ShearProfile::ramp(1.0), 0.05);
  const RunResult r = run(p, InitialDensity::truncated_gaussian(10.0), prof);
  CHECK(std::abs(r.series.samples.back().mass - 1.0) <= 1e-10);
  // the density drifted by roughly gamma(3) = 0.05 * 9 / 2
  CHECK(r.series.samples.back().stress ==
        doctest::Approx(prof.accumulated(3.0)).epsilon(0.05));
}

TEST_CASE("stationary start drifts only at the scheme's consistency order") {
  ModelParams p = desk_params(4000, 2.0);
  auto pinf = [](double s) { return stationary_density(s, 0.5, 2.0); };
  DensityField f0 = init_grid(p, pinf);
  const DensityField ref = f0;
  RunOptions opts;
  opts.sample_stride = 1.0;
  const double dt = automatic_dt(p, ShearProfile::constant(0.5), f0.dsigma, opts);
  const RunResult r = run_from(std::move(f0), 2.0, ShearProfile::constant(0.5), dt, opts);
  double l1 = 0.0;
  for (int i = 0; i < ref.n_cells(); ++i) l1 += std::abs(r.final_field.p[i] - ref.p[i]);
  l1 *= ref.dsigma;
  CHECK(l1 <= 4e-3);
}

TEST_CASE("distance helpers") {
  ModelParams p = desk_params(500);
  const DensityField f = init_grid(p, InitialDensity::truncated_gaussian(10.0));
  auto self = [&](double s) {
    const int i = static_cast<int>(std::llround((s + f.m_sigma) / f.dsigma - 0.5));
    return f.p[i];
  };
  CHECK(l2_distance(f, self) == 0.0);
  CHECK(l1_distance(f, self) == 0.0);
  const double c = 0.1;
  auto shifted = [&](double s) { return self(s) + c; };
  CHECK(l2_distance(f, shifted) ==
        doctest::Approx(c * std::sqrt(2.0 * f.m_sigma)).epsilon(1e-12));
}
