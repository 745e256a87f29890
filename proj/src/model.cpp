#include "rheokin/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rheokin {

void ModelParams::validate() const {
  if (!(sigma_c > 0.0)) throw ConfigError("sigma_c must be positive");
  if (!(m_sigma > sigma_c)) throw ConfigError("m_sigma must exceed sigma_c");
  if (n_cells < 8) throw ConfigError("n_cells must be at least 8");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cell_size() > 0.0)) throw ConfigError("cell size must be positive");
}

ShearProfile ShearProfile::constant(double rate) {
  if (!(rate > 0.0)) throw DegenerateShearError("constant shear rate must be positive");
  return ShearProfile(Kind::Constant, rate, 0.0);
}

ShearProfile ShearProfile::ramp(double slope) {
  if (!(slope > 0.0)) throw DegenerateShearError("ramp slope must be positive");
  return ShearProfile(Kind::Ramp, 0.0, slope);
}

ShearProfile ShearProfile::affine(double offset, double slope) {
  if (offset < 0.0 || slope < 0.0 || !(offset > 0.0 || slope > 0.0))
    throw DegenerateShearError("affine profile needs offset, slope >= 0 and not both zero");
  return ShearProfile(Kind::Affine, offset, slope);
}

ShearProfile ShearProfile::time_scaled(ShearProfile inner, double eps) {
  if (!(eps > 0.0)) throw ConfigError("time scale factor must be positive");
  ShearProfile p(Kind::TimeScaled, 0.0, 0.0);
  p.eps_ = eps;
  p.inner_ = std::make_shared<ShearProfile>(std::move(inner));
  return p;
}

double ShearProfile::rate(double t) const {
  switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Ramp: return a_ * t;
    case Kind::Affine: return c_ + a_ * t;
    case Kind::TimeScaled: return inner_->rate(eps_ * t);
  }
  return 0.0;
}

double ShearProfile::accumulated(double t) const {
  switch (kind_) {
    case Kind::Constant: return c_ * t;
    case Kind::Ramp: return 0.5 * a_ * t * t;
    case Kind::Affine: return c_ * t + 0.5 * a_ * t * t;
    case Kind::TimeScaled: return inner_->accumulated(eps_ * t) / eps_;
  }
  return 0.0;
}

double ShearProfile::lower_bound() const {
  switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Ramp: return 0.0;
    case Kind::Affine: return c_;  // slope >= 0, so the minimum sits at t = 0
    case Kind::TimeScaled: return inner_->lower_bound();
  }
  return 0.0;
}

double ShearProfile::max_rate(double t) const {
  // All variants are nondecreasing in time.
  return std::max(rate(0.0), rate(t));
}

double ShearProfile::first_time_reaching(double y) const {
  if (y <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Constant: return y / c_;
    case Kind::Ramp: return std::sqrt(2.0 * y / a_);
    case Kind::Affine: {
      if (a_ == 0.0) return y / c_;
      // Solve a t^2/2 + c t = y for the positive root.
      return (-c_ + std::sqrt(c_ * c_ + 2.0 * a_ * y)) / a_;
    }
    case Kind::TimeScaled: return inner_->first_time_reaching(eps_ * y) / eps_;
  }
  return std::numeric_limits<double>::infinity();
}

double gamma_accum(const ShearProfile& profile, double t) {
  if (t < 0.0) throw OutOfRangeError("gamma_accum: negative time");
  return profile.accumulated(t);
}

double gamma_inverse(const ShearProfile& profile, double y, double t_end) {
  if (y < 0.0) throw OutOfRangeError("gamma_inverse: negative accumulated shear");
  if (!(profile.lower_bound() > 0.0))
    throw DegenerateShearError("gamma_inverse: profile has no positive lower bound");
  const double y_max = profile.accumulated(t_end);
  if (y > y_max * (1.0 + 1e-12) + 1e-300)
    throw OutOfRangeError("gamma_inverse: value beyond gamma(t_end)");
  return std::min(profile.first_time_reaching(y), t_end);
}

namespace {

// First time in [t0, t1] at which gamma reaches y, clamped to the interval.
double clamped_inverse(const ShearProfile& profile, double y, double t0, double t1) {
  if (y <= profile.accumulated(t0)) return t0;
  if (y >= profile.accumulated(t1)) return t1;
  return std::clamp(profile.first_time_reaching(y), t0, t1);
}

}  // namespace

double occupation_time_between(const ShearProfile& profile, double t0, double t1, double sigma,
                               double sigma_c) {
  if (t0 < 0.0 || t1 < t0) throw OutOfRangeError("occupation_time: bad interval");
  const double g1 = profile.accumulated(t1);
  // chi(sigma - gamma(t1) + gamma(u)) = 1 iff gamma(u) < g1 - sigma - sigma_c
  //                                      or gamma(u) > g1 - sigma + sigma_c.
  const double u_low = clamped_inverse(profile, g1 - sigma - sigma_c, t0, t1);
  const double u_high = clamped_inverse(profile, g1 - sigma + sigma_c, t0, t1);
  return (u_low - t0) + (t1 - u_high);
}

double occupation_time(const ShearProfile& profile, double t, double sigma, double sigma_c) {
  if (t < 0.0) throw OutOfRangeError("occupation_time: negative time");
  if (!(profile.lower_bound() > 0.0))
    throw DegenerateShearError("occupation_time: profile has no positive lower bound");
  return occupation_time_between(profile, 0.0, t, sigma, sigma_c);
}

double stationary_density(double sigma, double gamma_inf, double sigma_c) {
  if (gamma_inf == 0.0)
    throw DegenerateShearError("stationary_density: stationary state non-unique at zero shear");
  if (gamma_inf < 0.0) return stationary_density(-sigma, -gamma_inf, sigma_c);
  if (sigma < 0.0) return 0.0;
  const double c = 1.0 / (sigma_c + gamma_inf);
  if (sigma <= sigma_c) return c;
  return c * std::exp(-(sigma - sigma_c) / gamma_inf);
}

SteadyObservables steady_observables(double gamma_rate, double sigma_c) {
  if (!(gamma_rate > 0.0))
    throw DegenerateShearError("steady_observables: shear rate must be positive");
  SteadyObservables s;
  s.f_inf = gamma_rate / (sigma_c + gamma_rate);
  s.tau_inf = 0.5 * (gamma_rate * gamma_rate / (sigma_c + gamma_rate) + sigma_c + gamma_rate);
  s.beta_inf = gamma_rate;
  s.kappa = kappa_closure(gamma_rate, sigma_c);
  return s;
}

double kappa_closure(double gamma_rate, double sigma_c) {
  if (gamma_rate < 0.0) throw DegenerateShearError("kappa_closure: negative shear rate");
  if (gamma_rate == 0.0) return 2.0;
  const double r = 1.0 + sigma_c / gamma_rate;
  return 2.0 / (1.0 + 1.0 / (r * r));
}

}  // namespace rheokin
