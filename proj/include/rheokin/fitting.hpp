#pragma once

#include <span>

namespace rheokin {

struct FitResult {
  double value;         // decay rate or log-log slope
  double residual_rms;  // RMS of the residuals of the linear fit in log space
  double window_lo = 0.0;
  double window_hi = 0.0;
  int n_points = 0;
};

/// Ordinary least squares of log y against t on [window_lo, window_hi];
/// value = -slope. Throws FitError on nonpositive samples in the window or
/// fewer than 3 points.
FitResult fit_exponential_rate(std::span<const double> t, std::span<const double> y,
                               double window_lo, double window_hi);

/// Least squares of log err against log eps; value = slope. Requires >= 3
/// pairs spanning a factor >= 4 in eps and positive errors.
FitResult fit_loglog_slope(std::span<const double> eps, std::span<const double> err);

}  // namespace rheokin
