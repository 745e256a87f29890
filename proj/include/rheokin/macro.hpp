#pragma once

#include <vector>

#include "rheokin/model.hpp"

namespace rheokin {

enum class MacroScheme { Mac1, Mac2, MacConst };
enum class KappaMode { PaperKappa, ConstantTwo };

struct MacroState {
  double theta;
  double tau;
  double f;  // NaN for the scalar Mac1 closure
};

struct MacroTrajectory {
  MacroScheme scheme;
  double epsilon;
  std::vector<MacroState> states;
  const MacroState& final_state() const { return states.back(); }
};

/// Scalar stress closure: eps dtau/dtheta = -tau + sigma_c^2/(2(sigma_c+gdot)) + gdot.
/// Exponential step, exact for frozen (midpoint) coefficients; dtheta may exceed eps.
MacroTrajectory integrate_mac1(double epsilon, const ShearProfile& gdot, double tau0,
                               double theta_end, double dtheta, double sigma_c);

/// Fluidity-stress closure: eps dtau/dtheta = -kappa f tau + gdot,
/// eps df/dtheta = -f + gdot/(sigma_c+gdot). KappaMode::ConstantTwo realizes the
/// constant-coefficient small-shear system.
MacroTrajectory integrate_mac2(double epsilon, const ShearProfile& gdot, double tau0, double f0,
                               double theta_end, double dtheta, double sigma_c, KappaMode mode);

/// Closed Duhamel form of the f-component (validation route for the stepped f):
/// f(theta) = f0 e^{-theta/eps} + (1/eps) int_0^theta f_inf(v) e^{(v-theta)/eps} dv.
double mac2_f_duhamel(double epsilon, const ShearProfile& gdot, double f0, double theta,
                      double sigma_c);

}  // namespace rheokin
