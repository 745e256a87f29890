// Command-line front end: steady states, kinetic runs, the semi-analytic
// solver, DDE kernels and rates, macroscopic closures, Monte Carlo estimates,
// the three reference experiments, and the three-way solver comparison.
//
// Exit codes: 0 success, 2 invalid configuration, 3 solver invariant
// violation, 4 tolerance failure in `compare`.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rheokin/characteristics.hpp"
#include "rheokin/csv.hpp"
#include "rheokin/dde.hpp"
#include "rheokin/experiments.hpp"
#include "rheokin/grid_solver.hpp"
#include "rheokin/macro.hpp"
#include "rheokin/pdmp.hpp"

using namespace rheokin;

namespace {

struct CommonOpts {
  ModelParams params;
  std::string profile_spec = "constant:1";
  std::string p0_spec = "gaussian";
  std::optional<double> epsilon;  // wraps the profile in a time scaling
  std::string out_dir;
  std::uint64_t seed = 1;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--sigma-c", o.params.sigma_c, "stress threshold");
  cmd->add_option("--m-sigma", o.params.m_sigma, "domain half-width");
  cmd->add_option("--n-cells", o.params.n_cells, "requested cell count");
  cmd->add_option("--dt", o.params.dt, "outer time step (<= 0: automatic)");
  cmd->add_option("--t-end", o.params.t_end, "horizon");
  cmd->add_option("--profile", o.profile_spec,
                  "shear profile: constant:<v> | ramp:<a> | affine:<c>:<a>");
  cmd->add_option("--p0", o.p0_spec,
                  "initial density: gaussian | uniform:<lo>:<hi> | stationary:<rate>");
  cmd->add_option("--epsilon", o.epsilon, "time-scale factor applied to the profile");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--jobs", o.jobs, "parallel sweep workers");
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

ShearProfile parse_profile(const CommonOpts& o) {
  std::stringstream ss(o.profile_spec);
  std::string kind;
  std::getline(ss, kind, ':');
  std::vector<double> args;
  std::string item;
  while (std::getline(ss, item, ':')) args.push_back(std::stod(item));
  ShearProfile base = [&] {
    if (kind == "constant" && args.size() == 1) return ShearProfile::constant(args[0]);
    if (kind == "ramp" && args.size() == 1) return ShearProfile::ramp(args[0]);
    if (kind == "affine" && args.size() == 2) return ShearProfile::affine(args[0], args[1]);
    throw ConfigError("unrecognized profile spec '" + o.profile_spec + "'");
  }();
  if (o.epsilon) return ShearProfile::time_scaled(base, *o.epsilon);
  return base;
}

InitialDensity parse_p0(const CommonOpts& o) {
  std::stringstream ss(o.p0_spec);
  std::string kind;
  std::getline(ss, kind, ':');
  std::vector<double> args;
  std::string item;
  while (std::getline(ss, item, ':')) args.push_back(std::stod(item));
  if (kind == "gaussian" && args.empty())
    return InitialDensity::truncated_gaussian(o.params.m_sigma);
  if (kind == "uniform" && args.size() == 2) return InitialDensity::uniform(args[0], args[1]);
  if (kind == "stationary" && args.size() == 1) {
    std::vector<double> x, v;
    const int n = 6001;
    for (int i = 0; i < n; ++i) {
      const double s = -o.params.m_sigma + 2.0 * o.params.m_sigma * i / (n - 1);
      x.push_back(s);
      v.push_back(stationary_density(s, args[0], o.params.sigma_c));
    }
    return InitialDensity::grid_sampled(x, v);
  }
  throw ConfigError("unrecognized p0 spec '" + o.p0_spec + "'");
}

std::string out_file(const CommonOpts& o, const std::string& name) {
  if (o.out_dir.empty()) return name;
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / name).string();
}

void emit(const CommonOpts& o, const std::string& name, const std::string& header,
          const std::vector<std::string>& rows) {
  const std::string path = out_file(o, name);
  csv::write_file(path, header, rows);
  std::printf("wrote %s (%zu rows)\n", path.c_str(), rows.size());
}

// ---- subcommand bodies ----

void cmd_steady(const CommonOpts& o, const std::vector<double>& gammas) {
  std::printf("gamma,f_inf,tau_inf,beta_inf,kappa\n");
  for (double g : gammas) {
    const SteadyObservables so = steady_observables(g, o.params.sigma_c);
    std::printf("%s,%s,%s,%s,%s\n", csv::g17(g).c_str(), csv::g17(so.f_inf).c_str(),
                csv::g17(so.tau_inf).c_str(), csv::g17(so.beta_inf).c_str(),
                csv::g17(so.kappa).c_str());
  }
}

void cmd_evolve(const CommonOpts& o, double stride) {
  RunOptions opts;
  opts.sample_stride = stride;
  const RunResult r = run(o.params, parse_p0(o), parse_profile(o), opts);
  std::vector<std::string> rows;
  for (const Observables& s : r.series.samples)
    rows.push_back(csv::join({csv::g17(s.t), csv::g17(s.fluidity), csv::g17(s.stress),
                              csv::g17(s.tail_moment), csv::g17(s.mass),
                              csv::g17(s.min_value)}));
  emit(o, "series.csv", "t,fluidity,stress,tail_moment,mass,min_value", rows);
  rows.clear();
  for (int i = 0; i < r.final_field.n_cells(); ++i)
    rows.push_back(
        csv::join({csv::g17(r.final_field.center(i)), csv::g17(r.final_field.p[i])}));
  emit(o, "final_density.csv", "sigma,p", rows);
}

void cmd_characteristics(const CommonOpts& o, double t, double phi_dt) {
  const ShearProfile profile = parse_profile(o);
  const InitialDensity p0 = parse_p0(o);
  if (phi_dt <= 0.0) phi_dt = default_phi_step(profile, o.params.sigma_c);
  const PhiTable table = compute_phi(std::max(t, o.params.t_end), phi_dt, p0, profile,
                                     o.params.sigma_c);
  const int n = aligned_cell_count(o.params.n_cells, o.params.m_sigma, o.params.sigma_c);
  const double ds = 2.0 * o.params.m_sigma / n;
  std::vector<std::string> rows;
  for (int i = 0; i < n; ++i) {
    const double s = -o.params.m_sigma + (i + 0.5) * ds;
    rows.push_back(csv::join({csv::g17(s), csv::g17(evaluate_p(t, s, table))}));
  }
  emit(o, "characteristics_density.csv", "sigma,p", rows);
  const FluidityCheck fc = fluidity_of_density(t, table);
  std::printf("t=%s fluidity=%s phi=%s gap=%s mass=%s\n", csv::g17(t).c_str(),
              csv::g17(fc.integral).c_str(), csv::g17(fc.phi_value).c_str(),
              csv::g17(fc.gap).c_str(), csv::g17(density_mass(t, table)).c_str());
}

void cmd_kernel(const CommonOpts& o, double omega, double t_end, double dt) {
  const KernelTable k = kernel_k(omega, t_end, dt);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < k.k.size(); ++i)
    rows.push_back(csv::join({csv::g17(k.dt * static_cast<double>(i)), csv::g17(k.k[i]),
                              csv::g17(k.k1[i])}));
  emit(o, "kernel.csv", "t,k,k1", rows);
}

void cmd_rate(const std::vector<double>& omegas, double eta) {
  std::printf("omega,sharp_b,alternate_b,c0_tilde,root_residual,beta\n");
  for (double w : omegas) {
    const RateEstimate e = sharp_rate_b(w, eta);
    std::printf("%s,%s,%s,%s,%s,%s\n", csv::g17(w).c_str(), csv::g17(e.b).c_str(),
                csv::g17(e.b_tilde).c_str(), csv::g17(e.c0_tilde).c_str(),
                csv::g17(e.residual).c_str(), csv::g17(e.beta).c_str());
  }
}

void cmd_macro(const CommonOpts& o, const std::string& scheme, double eps, double tau0, double f0,
               double theta_end, double dtheta) {
  const ShearProfile profile = parse_profile(o);
  if (dtheta <= 0.0) dtheta = theta_end / 1e4;
  MacroTrajectory traj = [&] {
    if (scheme == "mac1")
      return integrate_mac1(eps, profile, tau0, theta_end, dtheta, o.params.sigma_c);
    if (scheme == "mac2")
      return integrate_mac2(eps, profile, tau0, f0, theta_end, dtheta, o.params.sigma_c,
                            KappaMode::PaperKappa);
    if (scheme == "macc")
      return integrate_mac2(eps, profile, tau0, f0, theta_end, dtheta, o.params.sigma_c,
                            KappaMode::ConstantTwo);
    throw ConfigError("unknown macro scheme '" + scheme + "'");
  }();
  std::vector<std::string> rows;
  const std::size_t stride = std::max<std::size_t>(1, traj.states.size() / 2001);
  for (std::size_t i = 0; i < traj.states.size(); i += stride)
    rows.push_back(csv::join({csv::g17(traj.states[i].theta), csv::g17(traj.states[i].tau),
                              csv::g17(traj.states[i].f)}));
  emit(o, "macro_" + scheme + ".csv", "theta,tau,f", rows);
}

void cmd_pdmp(const CommonOpts& o, long n_paths, const std::string& samples) {
  PdmpConfig cfg;
  cfg.n_paths = n_paths;
  cfg.seed = o.seed;
  cfg.profile = parse_profile(o);
  cfg.sigma_c = o.params.sigma_c;
  cfg.t_end = o.params.t_end;
  cfg.p0 = parse_p0(o);
  std::vector<double> times = samples.empty() ? std::vector<double>{cfg.t_end}
                                              : split_doubles(samples);
  const auto estimates = estimate(cfg, times, o.jobs);
  std::vector<std::string> rows;
  for (const EnsembleEstimate& e : estimates)
    rows.push_back(csv::join({csv::g17(e.t), csv::g17(e.f_hat), csv::g17(e.f_se),
                              csv::g17(e.tau_hat), csv::g17(e.tau_se),
                              std::to_string(e.n)}));
  emit(o, "pdmp_estimates.csv", "t,f_hat,f_se,tau_hat,tau_se,n", rows);
}

void cmd_experiment(const CommonOpts& o, const std::string& which, bool paper_scale,
                    const std::string& gammas, const std::string& eps_list) {
  ExperimentConfig cfg;
  if (which == "i")
    cfg.tag = Experiment::I;
  else if (which == "ii")
    cfg.tag = Experiment::II;
  else if (which == "iii")
    cfg.tag = Experiment::III;
  else
    throw ConfigError("experiment must be one of i, ii, iii");
  cfg.params = o.params;
  if (cfg.tag != Experiment::I) cfg.params.t_end = 40.0;  // horizons come from theta/eps
  cfg.out_dir = o.out_dir.empty() ? ("experiment_" + which) : o.out_dir;
  cfg.paper_scale = paper_scale;
  cfg.jobs = o.jobs;
  cfg.seed = o.seed;
  if (!gammas.empty()) cfg.gamma_list = split_doubles(gammas);
  if (!eps_list.empty()) cfg.eps_list = split_doubles(eps_list);
  const ExperimentSummary s = run_experiment(cfg);
  for (const std::string& f : s.files_written) std::printf("wrote %s\n", f.c_str());
  for (const SlopeRow& r : s.slopes)
    std::printf("slope %s = %s (rms %s)\n", r.quantity.c_str(), csv::g17(r.slope).c_str(),
                csv::g17(r.residual).c_str());
  for (const RateRow& r : s.rates)
    std::printf("gamma=%g omega=%g fitted=%s sharp_b=%s alternate_b=%s\n", r.gamma_inf, r.omega,
                csv::g17(r.fitted_rate).c_str(), csv::g17(r.sharp_b).c_str(),
                csv::g17(r.alternate_b).c_str());
}

int cmd_compare(const CommonOpts& o, long n_paths) {
  CompareConfig cfg;
  cfg.params = o.params;
  cfg.n_paths = n_paths;
  cfg.seed = o.seed;
  const CompareReport r = three_way_compare(cfg);
  std::printf("grid vs characteristics: L1 %s (refined %s, factor %s) -> %s\n",
              csv::g17(r.l1_coarse).c_str(), csv::g17(r.l1_refined).c_str(),
              csv::g17(r.refinement_factor).c_str(),
              r.l1_pass && r.factor_pass ? "ok" : "OUT OF TOLERANCE");
  std::printf("fluidity: grid %s, characteristics %s (phi %s), pdmp %s +- %s -> %s\n",
              csv::g17(r.grid_f).c_str(), csv::g17(r.char_f).c_str(),
              csv::g17(r.char_phi).c_str(), csv::g17(r.pdmp_f).c_str(),
              csv::g17(r.pdmp_f_se).c_str(), r.pdmp_f_pass ? "ok" : "OUT OF TOLERANCE");
  std::printf("stress: grid %s, pdmp %s +- %s -> %s\n", csv::g17(r.grid_tau).c_str(),
              csv::g17(r.pdmp_tau).c_str(), csv::g17(r.pdmp_tau_se).c_str(),
              r.pdmp_tau_pass ? "ok" : "OUT OF TOLERANCE");
  return r.pass() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinetic laboratory for a one-dimensional aging-fluid model"};
  app.set_config("--config", "", "plain key=value configuration file (flags win)");
  app.require_subcommand(1);

  CommonOpts o;

  auto* steady = app.add_subcommand("steady", "closed-form steady observables");
  std::string gamma_list = "1";
  steady->add_option("--gamma", gamma_list, "comma-separated shear rates");
  add_common(steady, o);

  auto* evolve = app.add_subcommand("evolve", "grid run of the kinetic equation");
  double stride = 0.2;
  evolve->add_option("--stride", stride, "sampling stride");
  add_common(evolve, o);

  auto* chars = app.add_subcommand("characteristics", "semi-analytic renewal solution");
  double char_t = 5.0, phi_dt = 0.0;
  chars->add_option("--t", char_t, "evaluation time");
  chars->add_option("--phi-dt", phi_dt, "phi table step (<= 0: automatic)");
  add_common(chars, o);

  auto* kernel = app.add_subcommand("kernel", "delay-equation fundamental kernel");
  double omega = 1.0, kernel_t_end = 40.0, kernel_dt = 1e-4;
  kernel->add_option("--omega", omega, "delay");
  kernel->add_option("--kernel-t-end", kernel_t_end, "table horizon");
  kernel->add_option("--kernel-dt", kernel_dt, "table step");
  add_common(kernel, o);

  auto* rate = app.add_subcommand("rate", "sharp and alternate decay rates");
  std::string omega_list = "1";
  double eta = 0.0;
  rate->add_option("--omega", omega_list, "comma-separated delays");
  rate->add_option("--eta", eta, "safety margin subtracted from the root");

  auto* macro = app.add_subcommand("macro", "macroscopic closure integration");
  std::string scheme = "mac2";
  double eps = 0.05, tau0 = 0.0, f0 = 0.0, theta_end = 1.0, dtheta = 0.0;
  macro->add_option("--scheme", scheme, "mac1 | mac2 | macc");
  macro->add_option("--eps", eps, "scale separation");
  macro->add_option("--tau0", tau0, "initial stress");
  macro->add_option("--f0", f0, "initial fluidity");
  macro->add_option("--theta-end", theta_end, "macroscopic horizon");
  macro->add_option("--dtheta", dtheta, "macro step (<= 0: theta_end/1e4)");
  add_common(macro, o);

  auto* pdmp = app.add_subcommand("pdmp", "Monte Carlo jump-process estimates");
  long n_paths = 100000;
  std::string samples;
  pdmp->add_option("--n-paths", n_paths, "ensemble size");
  pdmp->add_option("--samples", samples, "comma-separated sample times (default: t_end)");
  add_common(pdmp, o);

  auto* experiment = app.add_subcommand("experiment", "reference studies i / ii / iii");
  std::string which = "i", exp_gammas, exp_eps;
  bool paper_scale = false;
  experiment->add_option("which", which, "i | ii | iii")->required();
  experiment->add_flag("--paper-scale", paper_scale, "paper-resolution settings");
  experiment->add_option("--gammas", exp_gammas, "override the constant-shear sweep");
  experiment->add_option("--eps-list", exp_eps, "override the epsilon sweep");
  add_common(experiment, o);

  auto* compare = app.add_subcommand("compare", "three-way oracle closure report");
  long cmp_paths = 100000;
  compare->add_option("--n-paths", cmp_paths, "ensemble size");
  add_common(compare, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (steady->parsed()) {
      cmd_steady(o, split_doubles(gamma_list));
    } else if (evolve->parsed()) {
      cmd_evolve(o, stride);
    } else if (chars->parsed()) {
      cmd_characteristics(o, char_t, phi_dt);
    } else if (kernel->parsed()) {
      cmd_kernel(o, omega, kernel_t_end, kernel_dt);
    } else if (rate->parsed()) {
      cmd_rate(split_doubles(omega_list), eta);
    } else if (macro->parsed()) {
      cmd_macro(o, scheme, eps, tau0, f0, theta_end, dtheta);
    } else if (pdmp->parsed()) {
      cmd_pdmp(o, n_paths, samples);
    } else if (experiment->parsed()) {
      cmd_experiment(o, which, paper_scale, exp_gammas, exp_eps);
    } else if (compare->parsed()) {
      if (!compare->count("--t-end")) o.params.t_end = 5.0;
      return cmd_compare(o, cmp_paths);
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const CflError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
