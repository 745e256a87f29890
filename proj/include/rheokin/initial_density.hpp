#pragma once

#include <utility>
#include <vector>

namespace rheokin {

// Initial datum p0: nonnegative, unit mass, bounded.
// Variants: truncated standard Gaussian on [-m_sigma, m_sigma] (renormalized),
// uniform density on an interval, and grid samples with linear interpolation.
class InitialDensity {
 public:
  static InitialDensity truncated_gaussian(double m_sigma);
  static InitialDensity uniform(double lo, double hi);
  // Samples on a strictly increasing grid; rescaled so the trapezoid mass is 1.
  static InitialDensity grid_sampled(std::vector<double> sigma, std::vector<double> values);

  double operator()(double sigma) const;
  double total_mass() const { return 1.0; }
  double sup_norm() const { return sup_norm_; }
  std::pair<double, double> support() const { return {lo_, hi_}; }
  // Points where the density is non-smooth (support edges, interior grid nodes).
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  // Inverse-CDF sample on the grid representation; u in [0, 1).
  double sample(double u) const;

 private:
  enum class Kind { Gaussian, Uniform, Grid };
  InitialDensity() = default;
  void build_cdf(int n_nodes);

  Kind kind_ = Kind::Uniform;
  double lo_ = 0.0, hi_ = 1.0;
  double height_ = 1.0;      // uniform value
  double gauss_norm_ = 1.0;  // 1 / (Z * sqrt(2 pi))
  std::vector<double> grid_x_, grid_v_;
  std::vector<double> cdf_x_, cdf_;  // monotone grid CDF for sampling
  std::vector<double> breakpoints_;
  double sup_norm_ = 0.0;
};

}  // namespace rheokin
