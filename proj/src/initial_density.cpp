#include "rheokin/initial_density.hpp"

#include <algorithm>
#include <cmath>

#include "rheokin/errors.hpp"

namespace rheokin {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;
}

InitialDensity InitialDensity::truncated_gaussian(double m_sigma) {
  if (!(m_sigma > 0.0)) throw ConfigError("truncated_gaussian: half-width must be positive");
  InitialDensity d;
  d.kind_ = Kind::Gaussian;
  d.lo_ = -m_sigma;
  d.hi_ = m_sigma;
  const double z = std::erf(m_sigma / std::sqrt(2.0));
  d.gauss_norm_ = 1.0 / (z * kSqrt2Pi);
  d.sup_norm_ = d.gauss_norm_;
  d.breakpoints_ = {-m_sigma, 0.0, m_sigma};
  d.build_cdf(4096);
  return d;
}

InitialDensity InitialDensity::uniform(double lo, double hi) {
  if (!(hi > lo)) throw ConfigError("uniform: empty interval");
  InitialDensity d;
  d.kind_ = Kind::Uniform;
  d.lo_ = lo;
  d.hi_ = hi;
  d.height_ = 1.0 / (hi - lo);
  d.sup_norm_ = d.height_;
  d.breakpoints_ = {lo, hi};
  d.build_cdf(2);
  return d;
}

InitialDensity InitialDensity::grid_sampled(std::vector<double> sigma, std::vector<double> values) {
  if (sigma.size() != values.size() || sigma.size() < 2)
    throw ConfigError("grid_sampled: need matching grids with at least two nodes");
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i)
    if (!(sigma[i + 1] > sigma[i])) throw ConfigError("grid_sampled: grid must be increasing");
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
    if (values[i] < 0.0) throw ConfigError("grid_sampled: negative density value");
    mass += 0.5 * (values[i] + values[i + 1]) * (sigma[i + 1] - sigma[i]);
  }
  if (!(mass > 0.0)) throw ConfigError("grid_sampled: zero mass");
  for (double& v : values) v /= mass;

  InitialDensity d;
  d.kind_ = Kind::Grid;
  d.lo_ = sigma.front();
  d.hi_ = sigma.back();
  // The density is continuous piecewise-linear; quadrature only needs a capped
  // set of split points, adaptivity absorbs the mild interior kinks.
  const std::size_t stride = std::max<std::size_t>(1, sigma.size() / 32);
  for (std::size_t i = 0; i < sigma.size(); i += stride) d.breakpoints_.push_back(sigma[i]);
  d.breakpoints_.push_back(sigma.back());
  d.sup_norm_ = *std::max_element(values.begin(), values.end());
  d.grid_x_ = std::move(sigma);
  d.grid_v_ = std::move(values);
  d.build_cdf(0);
  return d;
}

double InitialDensity::operator()(double sigma) const {
  if (sigma < lo_ || sigma > hi_) return 0.0;
  switch (kind_) {
    case Kind::Gaussian:
      return gauss_norm_ * std::exp(-0.5 * sigma * sigma);
    case Kind::Uniform:
      return (sigma > lo_ && sigma < hi_) ? height_ : 0.0;
    case Kind::Grid: {
      auto it = std::upper_bound(grid_x_.begin(), grid_x_.end(), sigma);
      if (it == grid_x_.begin()) return grid_v_.front();
      if (it == grid_x_.end()) return grid_v_.back();
      const std::size_t j = static_cast<std::size_t>(it - grid_x_.begin());
      const double w = (sigma - grid_x_[j - 1]) / (grid_x_[j] - grid_x_[j - 1]);
      return (1.0 - w) * grid_v_[j - 1] + w * grid_v_[j];
    }
  }
  return 0.0;
}

void InitialDensity::build_cdf(int n_nodes) {
  if (kind_ == Kind::Grid) {
    cdf_x_ = grid_x_;
    cdf_.assign(grid_x_.size(), 0.0);
    for (std::size_t i = 1; i < grid_x_.size(); ++i)
      cdf_[i] = cdf_[i - 1] + 0.5 * (grid_v_[i - 1] + grid_v_[i]) * (grid_x_[i] - grid_x_[i - 1]);
  } else {
    cdf_x_.resize(n_nodes + 1);
    cdf_.assign(n_nodes + 1, 0.0);
    for (int i = 0; i <= n_nodes; ++i)
      cdf_x_[i] = lo_ + (hi_ - lo_) * static_cast<double>(i) / n_nodes;
    if (kind_ == Kind::Gaussian) {
      const double z = std::erf(hi_ / std::sqrt(2.0));
      for (int i = 1; i <= n_nodes; ++i) {
        const double phi =
            0.5 * (std::erf(cdf_x_[i] / std::sqrt(2.0)) - std::erf(lo_ / std::sqrt(2.0)));
        cdf_[i] = phi / z;
      }
    } else {
      for (int i = 1; i <= n_nodes; ++i) cdf_[i] = (cdf_x_[i] - lo_) * height_;
    }
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double InitialDensity::sample(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return cdf_x_.front();
  if (it == cdf_.end()) return cdf_x_.back();
  const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
  const double c0 = cdf_[j - 1], c1 = cdf_[j];
  const double w = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
  return cdf_x_[j - 1] + w * (cdf_x_[j] - cdf_x_[j - 1]);
}

}  // namespace rheokin
