#pragma once

#include <functional>
#include <vector>

#include "rheokin/initial_density.hpp"
#include "rheokin/model.hpp"

namespace rheokin {

// Cell-averaged density on a uniform periodic grid over [-m_sigma, m_sigma).
// The grid is aligned so that sigma = 0 is exactly a cell center and
// +-sigma_c are cell boundaries (init_grid adjusts n_cells upward to achieve this).
struct DensityField {
  std::vector<double> p;
  double m_sigma = 0.0;
  double dsigma = 0.0;
  double sigma_c = 0.0;
  double time = 0.0;
  int zero_cell = 0;  // index of the cell centered at sigma = 0

  int n_cells() const { return static_cast<int>(p.size()); }
  double center(int i) const { return -m_sigma + (static_cast<double>(i) + 0.5) * dsigma; }
  double mass() const;
  double min_value() const;
  double tail_mass() const;  // mass in the two outermost cells (wrap-around monitor)
};

struct Observables {
  double t;
  double fluidity;     // dsigma * sum over chi cells
  double stress;       // dsigma * sum sigma_i p_i
  double tail_moment;  // dsigma * sum over chi cells of sigma_i p_i
  double mass;
  double min_value;
};

struct TimeSeries {
  std::vector<Observables> samples;
  double stride = 0.0;  // requested sampling stride in time units
};

/// Smallest aligned cell count >= n_request (odd, sigma_c on a boundary).
/// Throws GeometryError when sigma_c >= m_sigma or no aligned count exists nearby.
int aligned_cell_count(int n_request, double m_sigma, double sigma_c);

/// Samples p0 at cell centers and rescales so dsigma * sum p_i = 1 exactly.
DensityField init_grid(const ModelParams& params, const InitialDensity& p0);
DensityField init_grid(const ModelParams& params, const std::function<double(double)>& p0);

/// One splitting step: exact source decay with mass reinjection into the zero
/// cell, then one upwind advection sweep at CFL number rate*dt/dsigma (<= 1).
void step(DensityField& field, double dt, double rate);

Observables observe(const DensityField& field);

struct RunOptions {
  double cfl = 0.9;          // advection CFL target for the automatic step
  double dt_cap = 0.02;      // upper bound on the outer step (source-step resolution)
  double sample_stride = 0.2;
  bool check_invariants = true;
  double mass_tol = 1e-10;
  double tail_warn = 1e-8;
};

struct RunResult {
  TimeSeries series;
  DensityField final_field;
  bool tail_warning = false;
};

/// Runs the splitting scheme to params.t_end. The advection substep is
/// automatically subdivided to respect CFL <= 1; the source step is applied
/// once per outer dt. Records observables roughly every sample_stride time
/// units (always including t = 0 and t = t_end).
RunResult run(const ModelParams& params, const InitialDensity& p0, const ShearProfile& profile,
              const RunOptions& options = {});
RunResult run_from(DensityField field, double t_end, const ShearProfile& profile, double dt,
                   const RunOptions& options = {});

double l2_distance(const DensityField& field, const std::function<double(double)>& reference);
double l1_distance(const DensityField& field, const std::function<double(double)>& reference);

/// Outer step used by run() when params.dt <= 0: min(cfl*dsigma/max_rate, dt_cap).
double automatic_dt(const ModelParams& params, const ShearProfile& profile, double dsigma,
                    const RunOptions& options);

}  // namespace rheokin
