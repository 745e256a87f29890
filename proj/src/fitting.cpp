#include "rheokin/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rheokin/errors.hpp"

namespace rheokin {

namespace {

// OLS of y against x; returns {slope, intercept, rms residual}.
struct Line {
  double slope, intercept, rms;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw FitError("fit: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - slope * x[i] - intercept;
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / n)};
}

}  // namespace

FitResult fit_exponential_rate(std::span<const double> t, std::span<const double> y,
                               double window_lo, double window_hi) {
  if (t.size() != y.size()) throw FitError("fit_exponential_rate: size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window_lo || t[i] > window_hi) continue;
    if (!(y[i] > 0.0))
      throw FitError("fit_exponential_rate: nonpositive sample in the fit window");
    xs.push_back(t[i]);
    ys.push_back(std::log(y[i]));
  }
  if (xs.size() < 3) throw FitError("fit_exponential_rate: fewer than 3 points in the window");
  const Line line = ols(xs, ys);
  return {-line.slope, line.rms, window_lo, window_hi, static_cast<int>(xs.size())};
}

FitResult fit_loglog_slope(std::span<const double> eps, std::span<const double> err) {
  if (eps.size() != err.size()) throw FitError("fit_loglog_slope: size mismatch");
  if (eps.size() < 3) throw FitError("fit_loglog_slope: need at least 3 values");
  const auto [mn, mx] = std::minmax_element(eps.begin(), eps.end());
  if (!(*mn > 0.0) || *mx / *mn < 4.0)
    throw FitError("fit_loglog_slope: eps values must span a factor >= 4");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(err[i] > 0.0)) throw FitError("fit_loglog_slope: nonpositive error value");
    xs.push_back(std::log(eps[i]));
    ys.push_back(std::log(err[i]));
  }
  const Line line = ols(xs, ys);
  return {line.slope, line.rms, *mn, *mx, static_cast<int>(xs.size())};
}

}  // namespace rheokin
