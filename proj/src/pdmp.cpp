#include "rheokin/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace rheokin {

std::uint64_t path_seed(std::uint64_t master, long path_index) {
  // SplitMix64 on master + index; decorrelates neighbouring streams.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(path_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double draw_exponential(std::mt19937_64& rng) {
  // Strictly positive by construction.
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double u;
  do {
    u = uni(rng);
  } while (u <= 0.0);
  return -std::log(u);
}

}  // namespace

PathResult simulate_path(std::uint64_t seed, const ShearProfile& profile, double sigma0,
                         double sigma_c, double t_end, std::span<const double> sample_times,
                         std::span<double> samples_out) {
  std::mt19937_64 rng(seed);
  double t0 = 0.0;
  double s0 = sigma0;
  long jumps = 0;
  std::size_t next_sample = 0;

  auto record_until = [&](double t_limit) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t_limit) {
      const double ts = sample_times[next_sample];
      samples_out[next_sample] = s0 + profile.accumulated(ts) - profile.accumulated(t0);
      ++next_sample;
    }
  };

  while (true) {
    const double g0 = profile.accumulated(t0);
    const double exp_draw = draw_exponential(rng);
    double t_jump;
    if (s0 > sigma_c) {
      // Drift keeps the path above threshold; the clock runs from now on.
      t_jump = t0 + exp_draw;
    } else if (s0 >= -sigma_c) {
      // Silent until Sigma reaches +sigma_c, then the clock runs.
      const double t_enter = profile.first_time_reaching(g0 + sigma_c - s0);
      t_jump = t_enter + exp_draw;
    } else {
      // Hazard on [t0, t1] while below -sigma_c, silent through the window,
      // then the clock resumes above +sigma_c.
      const double t1 = profile.first_time_reaching(g0 - sigma_c - s0);
      const double budget = t1 - t0;
      if (exp_draw <= budget) {
        t_jump = t0 + exp_draw;
      } else {
        const double t_enter = profile.first_time_reaching(g0 + sigma_c - s0);
        t_jump = t_enter + (exp_draw - budget);
      }
    }
    if (!(t_jump < t_end)) {
      record_until(t_end);
      return {s0 + profile.accumulated(t_end) - g0, jumps};
    }
    record_until(t_jump);
    t0 = t_jump;
    s0 = 0.0;
    ++jumps;
  }
}

std::vector<EnsembleEstimate> estimate(const PdmpConfig& config,
                                       std::span<const double> sample_times, int jobs) {
  if (config.n_paths < 1) throw ConfigError("pdmp: need at least one path");
  for (std::size_t i = 0; i + 1 < sample_times.size(); ++i)
    if (!(sample_times[i] < sample_times[i + 1]))
      throw ConfigError("pdmp: sample times must be increasing");
  if (!sample_times.empty() && sample_times.back() > config.t_end)
    throw ConfigError("pdmp: sample time beyond t_end");

  const std::size_t n_times = sample_times.size();
  struct Block {
    std::vector<double> sum_sigma, sum_sigma2;
    std::vector<long> above;
  };
  constexpr long kBlock = 1024;  // fixed-size blocks keep sums independent of the thread count
  const long n_blocks = (config.n_paths + kBlock - 1) / kBlock;
  std::vector<Block> blocks(static_cast<std::size_t>(n_blocks));

  auto work = [&](long block_begin, long block_end) {
    std::vector<double> samples(n_times);
    for (long bi = block_begin; bi < block_end; ++bi) {
      Block& blk = blocks[static_cast<std::size_t>(bi)];
      blk.sum_sigma.assign(n_times, 0.0);
      blk.sum_sigma2.assign(n_times, 0.0);
      blk.above.assign(n_times, 0);
      const long lo = bi * kBlock;
      const long hi = std::min(config.n_paths, lo + kBlock);
      for (long i = lo; i < hi; ++i) {
        std::mt19937_64 init_rng(path_seed(config.seed, i));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        const double sigma0 = config.p0.sample(uni(init_rng));
        simulate_path(path_seed(config.seed ^ 0x5851F42D4C957F2DULL, i), config.profile, sigma0,
                      config.sigma_c, config.t_end, sample_times, samples);
        for (std::size_t j = 0; j < n_times; ++j) {
          blk.sum_sigma[j] += samples[j];
          blk.sum_sigma2[j] += samples[j] * samples[j];
          if (indicator(samples[j], config.sigma_c)) ++blk.above[j];
        }
      }
    }
  };

  jobs = std::clamp<int>(jobs, 1, static_cast<int>(std::min<long>(n_blocks, 64)));
  if (jobs <= 1) {
    work(0, n_blocks);
  } else {
    std::vector<std::thread> pool;
    const long per = (n_blocks + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      const long lo = j * per, hi = std::min<long>(n_blocks, lo + per);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<EnsembleEstimate> out(n_times);
  const double n = static_cast<double>(config.n_paths);
  for (std::size_t j = 0; j < n_times; ++j) {
    double s = 0.0, s2 = 0.0;
    long above = 0;
    for (const Block& blk : blocks) {
      s += blk.sum_sigma[j];
      s2 += blk.sum_sigma2[j];
      above += blk.above[j];
    }
    EnsembleEstimate& e = out[j];
    e.t = sample_times[j];
    e.n = config.n_paths;
    e.f_hat = static_cast<double>(above) / n;
    e.f_se = std::sqrt(std::max(e.f_hat * (1.0 - e.f_hat), 0.0) / n);
    e.tau_hat = s / n;
    const double var = std::max(s2 / n - e.tau_hat * e.tau_hat, 0.0);
    e.tau_se = std::sqrt(var / n);
  }
  return out;
}

}  // namespace rheokin
