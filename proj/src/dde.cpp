#include "rheokin/dde.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

namespace rheokin {

namespace {

// Duhamel memory weights over one step: int_{t-dt}^{t} e^{-(t-s)} g(s) ds
// = w0 * g(t-dt) + w1 * g(t), exact when g is linear on the step.
struct DuhamelWeights {
  double decay, w0, w1;
  explicit DuhamelWeights(double dt) {
    decay = std::exp(-dt);
    w1 = (dt - (1.0 - decay)) / dt;
    w0 = (1.0 - decay) - w1;
  }
};

}  // namespace

double KernelTable::operator()(double t) const {
  if (t < 0.0) return 0.0;
  if (t > t_end() * (1.0 + 1e-12))
    throw OutOfRangeError("KernelTable: time beyond the tabulated range");
  const double x = std::min(t / dt, static_cast<double>(k.size() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(x), k.size() - 2);
  const double w = x - static_cast<double>(j);
  return (1.0 - w) * k[j] + w * k[j + 1];
}

KernelTable kernel_k(double omega, double t_end, double dt) {
  if (!(omega > 0.0)) throw ConfigError("kernel_k: omega must be positive");
  if (!(dt > 0.0) || dt > omega / 32.0)
    throw ResolutionError("kernel_k: dt must satisfy 0 < dt <= omega/32");
  const long lag = std::lround(omega / dt);
  dt = omega / static_cast<double>(lag);
  const long n = static_cast<long>(std::ceil(t_end / dt - 1e-9));

  KernelTable table;
  table.omega = omega;
  table.dt = dt;
  table.k.resize(static_cast<std::size_t>(n) + 1);
  auto& k = table.k;
  for (long i = 0; i < std::min(lag, n + 1); ++i) k[i] = std::exp(-dt * static_cast<double>(i));

  const DuhamelWeights w(dt);
  for (long i = lag; i <= n; ++i) {
    if (i == lag) {
      // k(s - omega) vanishes a.e. on [omega - dt, omega); the join is exact.
      k[i] = w.decay * k[i - 1];
      continue;
    }
    k[i] = w.decay * k[i - 1] + w.w0 * k[i - 1 - lag] + w.w1 * k[i - lag];
  }

  const double lim = table.limit();
  table.k1.resize(k.size());
  const auto [b_tilde, c0_tilde] = alternate_rate(omega);
  for (std::size_t i = 0; i < k.size(); ++i) {
    table.k1[i] = k[i] - lim;
    // (crois:k) with the Remark's explicit constants, valid for all t.
    const double bound = c0_tilde * std::exp(-b_tilde * dt * static_cast<double>(i)) + 1e-12;
    if (std::abs(table.k1[i]) > bound)
      throw InvariantViolation("kernel_k: |k1| above the (2+omega) e^{-b~t} envelope at t=" +
                               std::to_string(dt * static_cast<double>(i)));
  }
  return table;
}

namespace {

double sharp_root_function(double omega, double x) {
  const double arg = std::exp(-2.0 * omega * x) - (x + 1.0) * (x + 1.0);
  const double beta = arg > 0.0 ? std::sqrt(arg) : 0.0;
  return x + 1.0 - std::exp(-omega * x) * std::cos(omega * beta);
}

}  // namespace

RateEstimate sharp_rate_b(double omega, double eta) {
  if (!(omega > 0.0)) throw ConfigError("sharp_rate_b: omega must be positive");
  if (eta < 0.0) throw ConfigError("sharp_rate_b: eta must be nonnegative");

  // Scan downward from 0- on a geometric-plus-linear grid until the sign flips.
  // F is O(x) (omega^2 - 1) near 0, so the sign reference is anchored only once
  // |F| rises above rounding noise.
  const double x_min = -30.0;
  double x_prev = -1e-9;
  double f_prev = sharp_root_function(omega, x_prev);
  bool sign_anchored = std::abs(f_prev) > 1e-12;
  double a = 0.0, b = 0.0;
  bool bracketed = false;
  for (double x = x_prev; x > x_min;) {
    x = x * 1.01 - 1e-7;
    const double f = sharp_root_function(omega, x);
    if (!sign_anchored) {
      if (std::abs(f) > 1e-12) {
        sign_anchored = true;
        x_prev = x;
        f_prev = f;
      }
      continue;
    }
    if (f == 0.0 || f * f_prev < 0.0) {
      a = x_prev;
      b = x;
      bracketed = true;
      break;
    }
    x_prev = x;
    f_prev = f;
  }
  if (!bracketed)
    throw NoRootError("sharp_rate_b: no sign change of F on [" + std::to_string(x_min) +
                      ", 0) for omega=" + std::to_string(omega));

  double fa = sharp_root_function(omega, a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = sharp_root_function(omega, m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if (fa * fm < 0.0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  const double root = 0.5 * (a + b);

  RateEstimate est;
  est.omega = omega;
  est.eta = eta;
  est.b = -root - eta;
  est.residual = std::abs(sharp_root_function(omega, root));
  const double arg = std::exp(-2.0 * omega * root) - (root + 1.0) * (root + 1.0);
  est.beta = arg > 0.0 ? std::sqrt(arg) : 0.0;
  std::tie(est.b_tilde, est.c0_tilde) = alternate_rate(omega);

  // (eq:carre): e^{2 w x} ((x+1)^2 + beta^2) = 1 at the root.
  const double carre =
      std::exp(2.0 * omega * root) * ((root + 1.0) * (root + 1.0) + est.beta * est.beta) - 1.0;
  if (std::abs(carre) > 1e-10)
    throw NoRootError("sharp_rate_b: (eq:carre) residual " + std::to_string(carre) +
                      " at the computed root");
  if (std::abs(est.b - 1.0) < 1e-6)
    std::cerr << "note: sharp rate b within 1e-6 of 1 (omega=" << omega << ")\n";
  return est;
}

std::pair<double, double> alternate_rate(double omega) {
  if (!(omega > 0.0)) throw ConfigError("alternate_rate: omega must be positive");
  const double b_tilde = -std::log1p(-std::exp(-2.0 * omega)) / (2.0 * omega);
  return {b_tilde, 2.0 + omega};
}

DdeSolution solve_dde(double omega, const std::function<double(double)>& nu,
                      const std::function<double(double)>& mu, double t_end, double dt,
                      int n_checkpoints) {
  if (!(omega > 0.0) || !(t_end > omega)) throw ConfigError("solve_dde: need t_end > omega > 0");
  if (!(dt > 0.0) || dt > omega / 32.0)
    throw ResolutionError("solve_dde: dt must satisfy 0 < dt <= omega/32");
  const long lag = std::lround(omega / dt);
  dt = omega / static_cast<double>(lag);
  const long n = static_cast<long>(std::ceil(t_end / dt - 1e-9));

  DdeSolution sol;
  sol.t.resize(static_cast<std::size_t>(n) + 1);
  sol.u.resize(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) sol.t[i] = dt * static_cast<double>(i);

  // Direct method of steps with the exact-linear Duhamel weights.
  for (long i = 0; i <= std::min(lag, n); ++i) sol.u[i] = nu(sol.t[i]);
  const DuhamelWeights w(dt);
  for (long i = lag + 1; i <= n; ++i) {
    const double g0 = sol.u[i - 1 - lag] + mu(sol.t[i - 1]);
    const double g1 = sol.u[i - lag] + mu(sol.t[i]);
    sol.u[i] = w.decay * sol.u[i - 1] + w.w0 * g0 + w.w1 * g1;
  }

  // Variation of constants: u(t) = nu(omega) k(t-omega) + int_0^omega nu k(t-s-omega) ds
  //                                + int_omega^t mu k(t-s) ds.
  const KernelTable kt = kernel_k(omega, t_end, dt);
  auto voc = [&](long idx) {
    // on-grid kernel values by index; t - omega as a float can land 1 ulp below 0
    double val = nu(omega) * kt.k[idx - lag];
    // History integral only where t - s - omega >= 0, i.e. s <= t - omega; k jumps at that edge.
    const long hist_cells = std::min(lag, idx - lag);
    double acc = 0.0;
    for (long j = 0; j < hist_cells; ++j) {
      const double s0 = dt * static_cast<double>(j), s1 = s0 + dt;
      acc += 0.5 * dt * (nu(s0) * kt.k[idx - lag - j] + nu(s1) * kt.k[idx - lag - j - 1]);
    }
    val += acc;
    acc = 0.0;
    for (long j = lag; j < idx; ++j) {
      const double s0 = sol.t[j], s1 = sol.t[j + 1];
      acc += 0.5 * dt * (mu(s0) * kt.k[idx - j] + mu(s1) * kt.k[idx - j - 1]);
    }
    return val + acc;
  };

  n_checkpoints = std::max(2, n_checkpoints);
  for (int c = 0; c < n_checkpoints; ++c) {
    long idx = lag + static_cast<long>(std::llround(static_cast<double>(n - lag) *
                                                    static_cast<double>(c) /
                                                    static_cast<double>(n_checkpoints - 1)));
    idx = std::clamp(idx, lag, n);
    const double v = voc(idx);
    sol.checkpoints.push_back(sol.t[idx]);
    sol.u_varconst.push_back(v);
    sol.max_discrepancy = std::max(sol.max_discrepancy, std::abs(v - sol.u[idx]));
  }
  return sol;
}

}  // namespace rheokin
