#include "rheokin/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

namespace rheokin {

namespace {

double kahan_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Exact source decay + reinjection at sigma = 0, then n_sub upwind sweeps at
// CFL number nu / n_sub each. Periodic wraparound.
void source_and_advect(DensityField& field, double dt, double nu, int n_sub) {
  const double decay = std::exp(-dt);
  auto& p = field.p;
  const int n = field.n_cells();
  double removed = 0.0, comp = 0.0;
  for (int i = 0; i < n; ++i) {
    if (indicator(field.center(i), field.sigma_c)) {
      const double delta = p[i] * (1.0 - decay);
      p[i] -= delta;
      const double y = delta - comp;
      const double t = removed + y;
      comp = (t - removed) - y;
      removed = t;
    }
  }
  p[field.zero_cell] += removed;  // removed * dsigma mass deposited in one cell

  if (nu > 0.0) {
    const double nu_sub = nu / static_cast<double>(n_sub);
    for (int k = 0; k < n_sub; ++k) {
      const double last = p[n - 1];
      double prev = p[0];
      p[0] += nu_sub * (last - p[0]);
      for (int i = 1; i < n; ++i) {
        const double cur = p[i];
        p[i] += nu_sub * (prev - cur);
        prev = cur;
      }
    }
  }
  field.time += dt;
}

}  // namespace

double DensityField::mass() const { return dsigma * kahan_sum(p); }

double DensityField::min_value() const { return *std::min_element(p.begin(), p.end()); }

double DensityField::tail_mass() const { return dsigma * (p.front() + p.back()); }

int aligned_cell_count(int n_request, double m_sigma, double sigma_c) {
  if (!(sigma_c < m_sigma)) throw GeometryError("grid: sigma_c must lie inside the domain");
  const int limit = 4 * n_request + 1000;
  for (int n = std::max(n_request, 9); n <= limit; ++n) {
    if (n % 2 == 0) continue;  // sigma = 0 is a center iff the cell count is odd
    const double r = static_cast<double>(n) * sigma_c / (2.0 * m_sigma);
    if (std::abs(r - std::floor(r) - 0.5) < 1e-9) return n;  // sigma_c on a boundary
  }
  throw GeometryError("grid: no aligned cell count near " + std::to_string(n_request));
}

namespace {

DensityField make_field(const ModelParams& params, const std::function<double(double)>& p0) {
  params.validate();
  DensityField f;
  const int n = aligned_cell_count(params.n_cells, params.m_sigma, params.sigma_c);
  f.m_sigma = params.m_sigma;
  f.dsigma = 2.0 * params.m_sigma / static_cast<double>(n);
  f.sigma_c = params.sigma_c;
  f.zero_cell = (n - 1) / 2;
  f.p.resize(n);
  for (int i = 0; i < n; ++i) f.p[i] = std::max(p0(f.center(i)), 0.0);
  const double mass = f.mass();
  if (!(mass > 0.0)) throw GeometryError("init_grid: initial datum has no mass on the grid");
  for (double& v : f.p) v /= mass;
  return f;
}

}  // namespace

DensityField init_grid(const ModelParams& params, const InitialDensity& p0) {
  return make_field(params, [&](double s) { return p0(s); });
}

DensityField init_grid(const ModelParams& params, const std::function<double(double)>& p0) {
  return make_field(params, p0);
}

void step(DensityField& field, double dt, double rate) {
  if (rate < 0.0) throw DegenerateShearError("step: negative shear rate");
  if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
  const double nu = rate * dt / field.dsigma;
  if (nu > 1.0 + 1e-12) throw CflError("step: CFL number " + std::to_string(nu) + " above 1");
  source_and_advect(field, dt, nu, 1);
}

Observables observe(const DensityField& field) {
  Observables o{};
  o.t = field.time;
  double f = 0.0, tau = 0.0, beta = 0.0;
  for (int i = 0; i < field.n_cells(); ++i) {
    const double c = field.center(i);
    const double v = field.p[i];
    tau += c * v;
    if (indicator(c, field.sigma_c)) {
      f += v;
      beta += c * v;
    }
  }
  o.fluidity = field.dsigma * f;
  o.stress = field.dsigma * tau;
  o.tail_moment = field.dsigma * beta;
  o.mass = field.mass();
  o.min_value = field.min_value();
  return o;
}

double automatic_dt(const ModelParams& params, const ShearProfile& profile, double dsigma,
                    const RunOptions& options) {
  const double rmax = profile.max_rate(params.t_end);
  double dt = options.dt_cap;
  if (rmax > 0.0) dt = std::min(dt, options.cfl * dsigma / rmax);
  return dt;
}

namespace {

void check_sample(const Observables& o, const RunOptions& options) {
  if (!options.check_invariants) return;
  if (std::abs(o.mass - 1.0) > options.mass_tol)
    throw InvariantViolation("run: mass drift " + std::to_string(o.mass - 1.0) +
                             " at t=" + std::to_string(o.t));
  if (o.min_value < 0.0)
    throw InvariantViolation("run: negative density at t=" + std::to_string(o.t));
  if (o.fluidity > o.mass + 1e-12)
    throw InvariantViolation("run: fluidity above total mass at t=" + std::to_string(o.t));
}

}  // namespace

RunResult run_from(DensityField field, double t_end, const ShearProfile& profile, double dt,
                   const RunOptions& options) {
  if (!(dt > 0.0)) throw ConfigError("run: dt must be positive");
  const double horizon = t_end - field.time;
  if (!(horizon > 0.0)) throw ConfigError("run: t_end not ahead of the field's time");
  const long n_steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
  dt = horizon / static_cast<double>(n_steps);
  const long stride_steps =
      std::max<long>(1, static_cast<long>(std::llround(options.sample_stride / dt)));

  RunResult result;
  result.series.stride = options.sample_stride;
  result.series.samples.push_back(observe(field));
  check_sample(result.series.samples.back(), options);

  const double t0 = field.time;
  for (long s = 0; s < n_steps; ++s) {
    const double rate = profile.rate(t0 + dt * static_cast<double>(s));
    const double nu = rate * dt / field.dsigma;
    const int n_sub = std::max(1, static_cast<int>(std::ceil(nu - 1e-12)));
    source_and_advect(field, dt, nu, n_sub);
    field.time = t0 + dt * static_cast<double>(s + 1);  // avoid accumulated rounding
    if ((s + 1) % stride_steps == 0 || s + 1 == n_steps) {
      result.series.samples.push_back(observe(field));
      check_sample(result.series.samples.back(), options);
      if (field.tail_mass() > options.tail_warn && !result.tail_warning) {
        result.tail_warning = true;
        std::cerr << "warning: wrap-around tail mass " << field.tail_mass()
                  << " at t=" << field.time << "\n";
      }
    }
  }
  result.final_field = std::move(field);
  return result;
}

RunResult run(const ModelParams& params, const InitialDensity& p0, const ShearProfile& profile,
              const RunOptions& options) {
  DensityField field = init_grid(params, p0);
  const double dt =
      params.dt > 0.0 ? params.dt : automatic_dt(params, profile, field.dsigma, options);
  return run_from(std::move(field), params.t_end, profile, dt, options);
}

double l2_distance(const DensityField& field, const std::function<double(double)>& reference) {
  double acc = 0.0;
  for (int i = 0; i < field.n_cells(); ++i) {
    const double d = field.p[i] - reference(field.center(i));
    acc += d * d;
  }
  return std::sqrt(field.dsigma * acc);
}

double l1_distance(const DensityField& field, const std::function<double(double)>& reference) {
  double acc = 0.0;
  for (int i = 0; i < field.n_cells(); ++i)
    acc += std::abs(field.p[i] - reference(field.center(i)));
  return field.dsigma * acc;
}

}  // namespace rheokin
