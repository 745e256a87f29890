#pragma once

#include <stdexcept>
#include <string>

namespace rheokin {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// gamma_dot is zero / sign-changing / has no positive lower bound where one is required.
struct DegenerateShearError : Error {
  using Error::Error;
};

// Requested value lies outside the representable range (e.g. gamma_inverse beyond the horizon).
struct OutOfRangeError : Error {
  using Error::Error;
};

// Grid cannot be built (sigma_c >= m_sigma, no aligned cell count, ...).
struct GeometryError : Error {
  using Error::Error;
};

// Advection CFL number above 1 in a single step.
struct CflError : Error {
  using Error::Error;
};

// Time grid too coarse for a method-of-steps window.
struct ResolutionError : Error {
  using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
  double achieved_error;
  QuadratureError(const std::string& msg, double err) : Error(msg), achieved_error(err) {}
};

// A runtime invariant (mass, positivity, ...) was violated during a run.
struct InvariantViolation : Error {
  using Error::Error;
};

// Root bracketing failed.
struct NoRootError : Error {
  using Error::Error;
};

// Least-squares fit preconditions not met.
struct FitError : Error {
  using Error::Error;
};

// Bad user-facing configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rheokin
