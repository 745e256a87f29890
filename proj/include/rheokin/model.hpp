#pragma once

#include <limits>
#include <memory>

#include "rheokin/errors.hpp"

namespace rheokin {

// Physical and discretization constants shared by every solver.
struct ModelParams {
  double sigma_c = 2.0;   // stress threshold, > 0
  double m_sigma = 10.0;  // domain half-width, > sigma_c
  int n_cells = 4000;     // requested cell count (>= 8); solvers may adjust upward for alignment
  double dt = 0.0;        // outer time step; <= 0 means automatic (CFL-limited, capped)
  double t_end = 40.0;    // horizon

  double cell_size() const { return 2.0 * m_sigma / n_cells; }
  void validate() const;  // throws ConfigError
};

/// Indicator of the relaxing region: 1 iff |sigma| > sigma_c (0 on the closed interval).
inline int indicator(double sigma, double sigma_c) {
  return (sigma > sigma_c || sigma < -sigma_c) ? 1 : 0;
}

// Driving shear rate with exact closed-form accumulation and inverse.
// Variants: Constant(v), Ramp(a) with rate a*t, Affine(c,a) with rate c+a*t,
// TimeScaled(inner, eps) with rate inner(eps*t).
class ShearProfile {
 public:
  static ShearProfile constant(double rate);
  static ShearProfile ramp(double slope);
  static ShearProfile affine(double offset, double slope);
  static ShearProfile time_scaled(ShearProfile inner, double eps);

  double rate(double t) const;
  double accumulated(double t) const;  // gamma(t) = int_0^t rate, exact per variant
  // Positive lower bound of the rate on [0, inf); 0 when none exists.
  double lower_bound() const;
  // Least upper bound of the rate on [0, t]; used for CFL step selection.
  double max_rate(double t) const;
  // First time u >= 0 with gamma(u) >= y (y >= 0). +inf if never reached.
  // Defined for any nonnegative-rate profile, including ramps with rate(0) = 0.
  double first_time_reaching(double y) const;

  bool is_constant() const { return kind_ == Kind::Constant; }
  double scale_epsilon() const { return kind_ == Kind::TimeScaled ? eps_ : 1.0; }

 private:
  enum class Kind { Constant, Ramp, Affine, TimeScaled };
  ShearProfile(Kind k, double c, double a) : kind_(k), c_(c), a_(a) {}
  Kind kind_;
  double c_ = 0.0;  // constant value / affine offset
  double a_ = 0.0;  // slope
  double eps_ = 1.0;
  std::shared_ptr<const ShearProfile> inner_;
};

/// gamma(t); rejects negative t.
double gamma_accum(const ShearProfile& profile, double t);

/// Inverse of the accumulation: t with gamma(t) = y.
/// Requires a declared positive lower bound (DegenerateShearError otherwise)
/// and y <= gamma(t_end) (OutOfRangeError otherwise).
double gamma_inverse(const ShearProfile& profile, double y, double t_end);

/// Occupation time Z(t, sigma) = int_0^t chi(sigma - gamma(t) + gamma(u)) du,
/// in closed form through the clamped inverse accumulation.
double occupation_time(const ShearProfile& profile, double t, double sigma, double sigma_c);

/// Occupation time on a sub-interval [t0, t1] of the characteristic ending at
/// sigma at time t1 (the renewal formula needs these partial integrals).
double occupation_time_between(const ShearProfile& profile, double t0, double t1, double sigma,
                               double sigma_c);

/// Three-branch stationary density p_inf(sigma) for constant rate gamma_inf != 0.
/// Negative rates are handled by the mirror argument; gamma_inf = 0 is rejected.
double stationary_density(double sigma, double gamma_inf, double sigma_c);

// Closed-form steady observables of p_inf.
struct SteadyObservables {
  double f_inf;    // gdot / (sigma_c + gdot)
  double tau_inf;  // (gdot^2/(sigma_c+gdot) + sigma_c + gdot) / 2
  double beta_inf; // int chi sigma p_inf = gdot
  double kappa;    // 2 / (1 + 1/(1 + sigma_c/gdot)^2), so kappa * f_inf * tau_inf = gdot
};
SteadyObservables steady_observables(double gamma_rate, double sigma_c);

/// Closure coefficient kappa(gdot); continuous limit kappa -> 2 as gdot -> 0+.
double kappa_closure(double gamma_rate, double sigma_c);

}  // namespace rheokin
