#include "rheokin/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rheokin/errors.hpp"

namespace rheokin::quadrature {

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> pts, double abs_tol) {
  if (b <= a) return 0.0;
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Per-segment termination scales with the requested absolute tolerance.
  const double inner_tol = std::clamp(0.1 * abs_tol, 1e-14, 1e-7);
  double total = 0.0;
  double err_total = 0.0;
  double lo = a;
  for (double hi : pts) {
    if (hi <= lo || hi > b) continue;
    double err = 0.0;
    total += gk::integrate(f, lo, hi, 13, inner_tol, &err);
    err_total += err;
    lo = hi;
  }
  if (!(err_total <= abs_tol) || !std::isfinite(total))
    throw QuadratureError("quadrature did not converge to the requested tolerance", err_total);
  return total;
}

}  // namespace rheokin::quadrature
