#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rheokin/initial_density.hpp"
#include "rheokin/model.hpp"

namespace rheokin {

// Piecewise-deterministic jump process: drift dSigma/dt = rate(t), jumps to 0
// at unit hazard while |Sigma| >= sigma_c. Jump clocks use the exact time
// change (the hazard is piecewise 0/1, crossing times come from the closed-form
// accumulation) so the simulation carries no time-discretization bias.
struct PdmpConfig {
  long n_paths = 100000;
  std::uint64_t seed = 1;
  ShearProfile profile = ShearProfile::constant(1.0);
  double sigma_c = 2.0;
  double t_end = 40.0;
  InitialDensity p0 = InitialDensity::truncated_gaussian(10.0);
};

struct PathResult {
  double sigma_final;
  long jump_count;
};

/// One path from a deterministic per-path seed; samples_out (parallel to
/// sample_times, both optional) receives Sigma at the requested times.
PathResult simulate_path(std::uint64_t seed, const ShearProfile& profile, double sigma0,
                         double sigma_c, double t_end,
                         std::span<const double> sample_times = {},
                         std::span<double> samples_out = {});

struct EnsembleEstimate {
  double t;
  double f_hat;    // P(|Sigma_t| > sigma_c)
  double f_se;
  double tau_hat;  // E[Sigma_t]
  double tau_se;
  long n;
};

/// Ensemble estimates at the given times. Per-path sub-seeds derive from the
/// master seed; accumulation is blocked so results are bit-identical for any
/// job count. sample_times must be increasing; t_end must cover them.
std::vector<EnsembleEstimate> estimate(const PdmpConfig& config,
                                       std::span<const double> sample_times, int jobs = 1);

/// Deterministic sub-seed for path i (SplitMix64 over the master seed).
std::uint64_t path_seed(std::uint64_t master, long path_index);

}  // namespace rheokin
