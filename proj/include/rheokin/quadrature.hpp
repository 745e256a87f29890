#pragma once

#include <functional>
#include <vector>

namespace rheokin::quadrature {

// Adaptive Gauss-Kronrod integration of f over [a, b] with forced subdivision
// at the given interior breakpoints (kinks / jumps of the integrand).
// Throws QuadratureError when the summed error estimate exceeds abs_tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> interior_breakpoints, double abs_tol = 1e-9);

}  // namespace rheokin::quadrature
