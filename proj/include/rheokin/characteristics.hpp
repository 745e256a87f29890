#pragma once

#include <vector>

#include "rheokin/initial_density.hpp"
#include "rheokin/model.hpp"

namespace rheokin {

// Tabulated boundary-flux function phi on a uniform time grid. phi equals the
// fluidity a.e.; it is built by induction over the windows
// [gamma^{-1}(k sigma_c), gamma^{-1}((k+1) sigma_c)] and is immutable afterward.
struct PhiTable {
  double dt = 0.0;
  std::vector<double> values;      // values[i] = phi(i * dt)
  ShearProfile profile;
  InitialDensity p0;
  double sigma_c = 0.0;

  double t_end() const { return dt * static_cast<double>(values.size() - 1); }
  double operator()(double t) const;  // linear interpolation, range checked
};

/// A(t): mass above threshold transported from the initial datum, damped by the
/// occupation-time exponential. Adaptive quadrature with breakpoints at the
/// integrand's kinks; result lies in [0, 1].
double compute_A(double t, const InitialDensity& p0, const ShearProfile& profile, double sigma_c,
                 double abs_tol = 1e-9);

/// Builds the phi table on [0, t_end] with step dt (window by window).
/// Throws ResolutionError when fewer than 16 samples fall in some induction window.
PhiTable compute_phi(double t_end, double dt, const InitialDensity& p0,
                     const ShearProfile& profile, double sigma_c, double a_tol = 1e-9);

/// Pointwise density by the explicit renewal formula (transported initial datum
/// plus the phi-weighted boundary term).
double evaluate_p(double t, double sigma, const PhiTable& phi);

struct FluidityCheck {
  double integral;   // int chi p(t, .)
  double phi_value;  // phi(t)
  double gap;        // |integral - phi(t)|
};

/// Quadrature of chi * p(t, .) against the table's phi(t).
FluidityCheck fluidity_of_density(double t, const PhiTable& phi, double abs_tol = 2e-6);

/// Quadrature of p(t, .) over the line (mass check).
double density_mass(double t, const PhiTable& phi, double abs_tol = 2e-6);

/// Default table step: resolves the first induction window.
double default_phi_step(const ShearProfile& profile, double sigma_c);

}  // namespace rheokin
