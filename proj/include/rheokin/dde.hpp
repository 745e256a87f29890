#pragma once

#include <functional>
#include <vector>

#include "rheokin/errors.hpp"

namespace rheokin {

// Fundamental kernel of u' + u - u(t - omega) = 0 with k(0) = 1, k = 0 on t < 0,
// tabulated on a uniform grid whose step divides omega exactly.
struct KernelTable {
  double omega = 0.0;
  double dt = 0.0;
  std::vector<double> k;   // k[i] = k(i * dt)
  std::vector<double> k1;  // k - 1/(1+omega)

  double limit() const { return 1.0 / (1.0 + omega); }
  double t_end() const { return dt * static_cast<double>(k.size() - 1); }
  double operator()(double t) const;  // linear interpolation; 0 for t < 0
};

/// Method-of-steps construction: exact e^{-t} on [0, omega), then the one-window
/// Duhamel update with memory weights exact for linear integrands.
/// dt is snapped to omega / m; requires dt <= omega / 32.
KernelTable kernel_k(double omega, double t_end, double dt);

struct RateEstimate {
  double omega;
  double b;         // sharp decay rate: -root - eta
  double b_tilde;   // alternate (conservative) rate
  double c0_tilde;  // alternate prefactor 2 + omega
  double residual;  // |F(root)|
  double eta;
  double beta;      // imaginary part of the root pair, sqrt(e^{-2 w x} - (x+1)^2)
};

/// Largest negative root of F(x) = x + 1 - e^{-wx} cos(w sqrt(max(e^{-2wx} - (x+1)^2, 0)))
/// by downward scan + bisection; verifies e^{2wx}((x+1)^2 + beta^2) = 1 to 1e-10.
RateEstimate sharp_rate_b(double omega, double eta = 0.0);

/// Remark's explicit envelope: b_tilde = -log(1 - e^{-2w})/(2w), C0_tilde = 2 + w.
std::pair<double, double> alternate_rate(double omega);

struct DdeSolution {
  std::vector<double> t;
  std::vector<double> u;             // method-of-steps solution
  std::vector<double> checkpoints;   // times where the two routes were compared
  std::vector<double> u_varconst;    // variation-of-constants values there
  double max_discrepancy = 0.0;
};

/// Solves u' + u - u(t-omega) = mu(t) for t > omega with u = nu on [0, omega],
/// both by direct stepping and by the variation-of-constants convolution with
/// kernel_k; reports the largest gap between the two routes.
DdeSolution solve_dde(double omega, const std::function<double(double)>& nu,
                      const std::function<double(double)>& mu, double t_end, double dt,
                      int n_checkpoints = 25);

}  // namespace rheokin
