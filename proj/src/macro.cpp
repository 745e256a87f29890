#include "rheokin/macro.hpp"

#include <cmath>
#include <limits>

#include "rheokin/quadrature.hpp"

namespace rheokin {

namespace {

void validate(double epsilon, double theta_end, double dtheta) {
  if (!(epsilon > 0.0)) throw ConfigError("macro: epsilon must be positive");
  if (!(theta_end > 0.0) || !(dtheta > 0.0)) throw ConfigError("macro: bad theta grid");
}

double f_equilibrium(const ShearProfile& gdot, double theta, double sigma_c) {
  const double g = gdot.rate(theta);
  return g / (sigma_c + g);
}

}  // namespace

MacroTrajectory integrate_mac1(double epsilon, const ShearProfile& gdot, double tau0,
                               double theta_end, double dtheta, double sigma_c) {
  validate(epsilon, theta_end, dtheta);
  const long n = static_cast<long>(std::ceil(theta_end / dtheta - 1e-9));
  dtheta = theta_end / static_cast<double>(n);

  MacroTrajectory traj{MacroScheme::Mac1, epsilon, {}};
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  double tau = tau0;
  traj.states.push_back({0.0, tau, std::numeric_limits<double>::quiet_NaN()});
  const double decay = std::exp(-dtheta / epsilon);
  for (long i = 0; i < n; ++i) {
    const double theta_mid = (static_cast<double>(i) + 0.5) * dtheta;
    const double g = gdot.rate(theta_mid);
    const double forcing = sigma_c * sigma_c / (2.0 * (sigma_c + g)) + g;
    tau = decay * tau + (1.0 - decay) * forcing;
    traj.states.push_back({dtheta * static_cast<double>(i + 1), tau,
                           std::numeric_limits<double>::quiet_NaN()});
  }
  return traj;
}

MacroTrajectory integrate_mac2(double epsilon, const ShearProfile& gdot, double tau0, double f0,
                               double theta_end, double dtheta, double sigma_c, KappaMode mode) {
  validate(epsilon, theta_end, dtheta);
  if (f0 < 0.0) throw ConfigError("macro: f0 must be nonnegative");
  const long n = static_cast<long>(std::ceil(theta_end / dtheta - 1e-9));
  dtheta = theta_end / static_cast<double>(n);

  MacroTrajectory traj{mode == KappaMode::PaperKappa ? MacroScheme::Mac2 : MacroScheme::MacConst,
                       epsilon,
                       {}};
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  double tau = tau0, f = f0;
  traj.states.push_back({0.0, tau, f});
  const double decay = std::exp(-dtheta / epsilon);
  const double half_decay = std::exp(-0.5 * dtheta / epsilon);
  for (long i = 0; i < n; ++i) {
    const double theta0 = dtheta * static_cast<double>(i);
    const double theta_mid = theta0 + 0.5 * dtheta;

    // f is autonomous and linear: exact half step supplies the frozen midpoint value.
    const double f_mid =
        half_decay * f + (1.0 - half_decay) * f_equilibrium(gdot, theta0 + 0.25 * dtheta, sigma_c);
    const double g_mid = gdot.rate(theta_mid);
    const double kappa =
        mode == KappaMode::PaperKappa ? kappa_closure(g_mid, sigma_c) : 2.0;
    const double a = kappa * f_mid;
    const double x = a * dtheta / epsilon;
    if (x > 1e-12) {
      const double em = -std::expm1(-x);  // 1 - e^{-x}
      tau = tau + em * (g_mid / a - tau);
    } else {
      tau += dtheta / epsilon * (g_mid - a * tau);
    }
    f = decay * f + (1.0 - decay) * f_equilibrium(gdot, theta_mid, sigma_c);
    traj.states.push_back({dtheta * static_cast<double>(i + 1), tau, f});
  }
  return traj;
}

double mac2_f_duhamel(double epsilon, const ShearProfile& gdot, double f0, double theta,
                      double sigma_c) {
  if (!(epsilon > 0.0) || !(theta >= 0.0)) throw ConfigError("mac2_f_duhamel: bad arguments");
  // Substitute x = (theta - v)/eps; the e^{-x} weight confines the mass to x = O(1).
  const double x_max = std::min(theta / epsilon, 46.0);
  auto f = [&](double x) { return f_equilibrium(gdot, theta - epsilon * x, sigma_c) * std::exp(-x); };
  const double integral = quadrature::integrate(f, 0.0, x_max, {}, 1e-12);
  return f0 * std::exp(-theta / epsilon) + integral;
}

}  // namespace rheokin
