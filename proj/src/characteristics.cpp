#include "rheokin/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rheokin/quadrature.hpp"

namespace rheokin {

double PhiTable::operator()(double t) const {
  if (t < 0.0 || t > t_end() * (1.0 + 1e-12) + 1e-300)
    throw OutOfRangeError("PhiTable: time outside the tabulated range");
  const double x = std::min(t / dt, static_cast<double>(values.size() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(x), values.size() - 2);
  const double w = x - static_cast<double>(j);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

namespace {

// Breakpoints of sigma -> chi(sigma) p0(sigma - gamma_t) exp(-Z(t, sigma)).
std::vector<double> a_integrand_breakpoints(const InitialDensity& p0, double gamma_t,
                                            double sigma_c) {
  std::vector<double> pts = {-sigma_c, sigma_c, gamma_t - sigma_c, gamma_t + sigma_c, gamma_t};
  for (double b : p0.breakpoints()) pts.push_back(b + gamma_t);
  return pts;
}

}  // namespace

double compute_A(double t, const InitialDensity& p0, const ShearProfile& profile, double sigma_c,
                 double abs_tol) {
  if (t < 0.0) throw OutOfRangeError("compute_A: negative time");
  const double gamma_t = profile.accumulated(t);
  const auto [lo, hi] = p0.support();
  const double a = lo + gamma_t, b = hi + gamma_t;
  auto f = [&](double sigma) {
    if (indicator(sigma, sigma_c) == 0) return 0.0;
    const double v = p0(sigma - gamma_t);
    if (v == 0.0) return 0.0;
    return v * std::exp(-occupation_time_between(profile, 0.0, t, sigma, sigma_c));
  };
  const double val =
      quadrature::integrate(f, a, b, a_integrand_breakpoints(p0, gamma_t, sigma_c), abs_tol);
  return std::clamp(val, 0.0, 1.0 + abs_tol);
}

double default_phi_step(const ShearProfile& profile, double sigma_c) {
  const double t_star = profile.first_time_reaching(sigma_c);
  return std::min(t_star / 64.0, 1e-2);
}

PhiTable compute_phi(double t_end, double dt, const InitialDensity& p0,
                     const ShearProfile& profile, double sigma_c, double a_tol) {
  if (!(profile.lower_bound() > 0.0))
    throw DegenerateShearError("compute_phi: profile has no positive lower bound");
  if (!(t_end > 0.0) || !(dt > 0.0)) throw ConfigError("compute_phi: bad grid");
  const std::size_t n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  dt = t_end / static_cast<double>(n);

  // Every induction window met before t_end must hold at least 16 samples.
  const double t_star = profile.first_time_reaching(sigma_c);
  for (int k = 0;; ++k) {
    const double wa = profile.first_time_reaching(k * sigma_c);
    if (wa >= t_end) break;
    const double wb = profile.first_time_reaching((k + 1) * sigma_c);
    if (wb - wa < 16.0 * dt)
      throw ResolutionError("compute_phi: grid step too coarse for induction window k=" +
                            std::to_string(k));
  }

  PhiTable table{dt, std::vector<double>(n + 1), profile, p0, sigma_c};
  auto& phi = table.values;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = dt * static_cast<double>(i);
    double v = compute_A(t, p0, profile, sigma_c, a_tol);
    if (t > t_star) {
      const double s_star = profile.first_time_reaching(profile.accumulated(t) - sigma_c);
      // Memory integral int_0^{s*} phi(s) exp(-t + gamma^{-1}(gamma(s) + sigma_c)) ds,
      // trapezoid on the stored samples plus the partial last cell.
      auto weight = [&](double s) {
        return std::exp(-t + profile.first_time_reaching(profile.accumulated(s) + sigma_c));
      };
      const std::size_t m = static_cast<std::size_t>(s_star / dt);
      double acc = 0.0;
      double w_prev = weight(0.0);
      for (std::size_t j = 1; j <= m; ++j) {
        const double w_j = weight(dt * static_cast<double>(j));
        acc += 0.5 * dt * (phi[j - 1] * w_prev + phi[j] * w_j);
        w_prev = w_j;
      }
      const double rem = s_star - dt * static_cast<double>(m);
      if (rem > 0.0) {
        const double frac = rem / dt;
        const double phi_s = (1.0 - frac) * phi[m] + frac * phi[m + 1];
        acc += 0.5 * rem * (phi[m] * w_prev + phi_s * weight(s_star));
      }
      v += acc;
    }
    // (maj:phi): 0 <= phi <= 1 up to quadrature tolerance.
    if (v < -a_tol || v > 1.0 + 1e-6)
      throw InvariantViolation("compute_phi: phi outside [0, 1] at t=" + std::to_string(t));
    phi[i] = std::max(v, 0.0);
  }
  return table;
}

double evaluate_p(double t, double sigma, const PhiTable& table) {
  const ShearProfile& profile = table.profile;
  const double gamma_t = profile.accumulated(t);
  double value = 0.0;
  const double transported = table.p0(sigma - gamma_t);
  if (transported > 0.0)
    value += transported * std::exp(-occupation_time_between(profile, 0.0, t, sigma, table.sigma_c));
  if (sigma > 0.0 && sigma < gamma_t) {
    const double s = profile.first_time_reaching(gamma_t - sigma);
    const double rate_s = profile.rate(s);
    value += table(s) / rate_s *
             std::exp(-occupation_time_between(profile, s, t, sigma, table.sigma_c));
  }
  return value;
}

namespace {

std::vector<double> p_breakpoints(const PhiTable& table, double t) {
  const double gamma_t = table.profile.accumulated(t);
  std::vector<double> pts = {-table.sigma_c, table.sigma_c, 0.0, gamma_t,
                             gamma_t - table.sigma_c, gamma_t + table.sigma_c};
  for (double b : table.p0.breakpoints()) pts.push_back(b + gamma_t);
  // phi's window joins pull kinks into the renewal term at sigma = gamma_t - k sigma_c.
  for (int k = 0; k * table.sigma_c <= gamma_t; ++k) pts.push_back(gamma_t - k * table.sigma_c);
  return pts;
}

std::pair<double, double> p_bounds(const PhiTable& table, double t) {
  const double gamma_t = table.profile.accumulated(t);
  const auto [lo, hi] = table.p0.support();
  return {std::min(lo + gamma_t, 0.0), std::max(hi + gamma_t, gamma_t)};
}

}  // namespace

FluidityCheck fluidity_of_density(double t, const PhiTable& table, double abs_tol) {
  const auto [a, b] = p_bounds(table, t);
  auto f = [&](double sigma) {
    if (indicator(sigma, table.sigma_c) == 0) return 0.0;
    return evaluate_p(t, sigma, table);
  };
  const double integral = quadrature::integrate(f, a, b, p_breakpoints(table, t), abs_tol);
  const double phi_t = table(t);
  return {integral, phi_t, std::abs(integral - phi_t)};
}

double density_mass(double t, const PhiTable& table, double abs_tol) {
  const auto [a, b] = p_bounds(table, t);
  auto f = [&](double sigma) { return evaluate_p(t, sigma, table); };
  return quadrature::integrate(f, a, b, p_breakpoints(table, t), abs_tol);
}

}  // namespace rheokin
