#include "levyspec/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "levyspec/errors.hpp"
#include "levyspec/montecarlo.hpp"
#include "levyspec/numerics.hpp"
#include "levyspec/observables.hpp"
#include "levyspec/partition.hpp"
#include "levyspec/runio.hpp"
#include "levyspec/spectrum.hpp"

namespace levyspec::cli {

namespace {

using nlohmann::json;

void say(const CmdOptions& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << "\n";
}

std::uint64_t effective_seed(const RunConfig& cfg, const CmdOptions& opt) {
  return opt.seed.value_or(cfg.mc_seed);
}

std::string config_hash(const RunConfig& cfg) {
  return io::hex64(io::fnv1a(cfg.canonical() + "|v" + kVersion));
}

std::shared_ptr<KernelOperator> make_operator(const RunConfig& cfg,
                                              const CmdOptions& opt,
                                              const MassFunction& mass,
                                              const Grid& grid) {
  auto op = std::make_shared<KernelOperator>(cfg.make_model(), mass,
                                             cfg.kill_rate, grid);
  if (opt.tamper_kernel) op->tamper_entry(grid.N / 2, grid.N / 2);
  return op;
}

json solution_to_json(const RunConfig& cfg, const SpectralSolution& sol) {
  json j;
  j["config_hash"] = config_hash(cfg);
  j["version"] = kVersion;
  j["grid"] = {{"L", sol.grid().L}, {"N", sol.grid().N}};
  j["kill_rate"] = cfg.kill_rate;
  j["v0"] = sol.op().v0();
  j["gamma"] = sol.gamma();
  j["free_energy"] = sol.free_energy();
  j["spectral_gap"] = sol.spectral_gap();
  j["correlation_rate"] = sol.correlation_rate();
  j["lambda"] = sol.lambdas();
  j["mu_head"] = std::vector<double>(
      sol.mu_all().begin(),
      sol.mu_all().begin() + std::min<size_t>(sol.mu_all().size(), 200));
  auto q1 = sol.q(1);
  j["q1"] = q1;
  j["ell1"] = sol.ell1();
  j["K"] = sol.K_values();
  auto qn = nlohmann::json::array();
  for (int n = 1; n <= sol.retained(); ++n) qn.push_back(sol.q(n));
  j["q"] = qn;
  std::vector<double> betas;
  for (int n = 1; n <= sol.retained(); ++n) betas.push_back(sol.beta(n));
  j["beta"] = betas;
  return j;
}

std::string summary_line(const SpectralSolution& sol) {
  std::ostringstream os;
  os.precision(10);
  os << "gamma=" << sol.gamma() << " E=" << sol.free_energy()
     << " gap=" << sol.spectral_gap() << " C=" << sol.correlation_rate();
  return os.str();
}

void emit_spectrum_files(const RunConfig&, const CmdOptions& opt,
                         const json& j, io::Manifest& manifest) {
  auto path = io::write_text(opt.out_dir, "spectrum.json", j.dump() + "\n");
  manifest.add_file(path);
  std::vector<double> xs;
  Grid grid(j["grid"]["L"].get<double>(), j["grid"]["N"].get<int>());
  for (int i = 0; i < grid.N; ++i) xs.push_back(grid.x(i));
  auto csv = io::write_csv(
      opt.out_dir, "spectrum.csv",
      {{"x", xs},
       {"q1", j["q1"].get<std::vector<double>>()},
       {"ell1", j["ell1"].get<std::vector<double>>()},
       {"K", j["K"].get<std::vector<double>>()}});
  manifest.add_file(csv);
}

/// Total variation between two histogram mass vectors (already summing
/// to <= 1 each; leftover mass is counted against the difference).
double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sa = 0.0, sb = 0.0, d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    d += std::abs(a[i] - b[i]);
    sa += a[i];
    sb += b[i];
  }
  d += std::abs((1.0 - sa) - (1.0 - sb));
  return 0.5 * d;
}

/// Bin masses of a grid density: exact piecewise-linear integration
/// (node-count binning aliases when the bin width is incommensurate
/// with the grid step).
std::vector<double> bin_grid_density(const Grid& grid,
                                     const std::vector<double>& density,
                                     double lo, double w, int nbins) {
  return bin_density_linear(grid, density, lo, w, nbins);
}

}  // namespace

int cmd_potential(const RunConfig& cfg, const CmdOptions& opt) {
  auto model = cfg.make_model();
  PotentialDensity pd(model, cfg.kill_rate);
  auto mass = cfg.make_mass();
  Grid grid = cfg.make_grid(mass);

  io::Manifest manifest(cfg.canonical(), kVersion);
  std::vector<double> xs, vs;
  for (int i = 0; i < grid.N; ++i) {
    xs.push_back(grid.x(i));
    vs.push_back(pd.value(std::abs(grid.x(i))));
  }
  auto p1 = io::write_csv(opt.out_dir, "potential.csv", {{"x", xs}, {"v", vs}});
  manifest.add_file(p1);

  std::vector<double> rs, v0s, v0pred;
  for (double rr : cfg.smallr_list) {
    PotentialDensity pr(model, rr);
    rs.push_back(rr);
    v0s.push_back(pr.v0());
    v0pred.push_back(v0_asymptotic(model, rr));
  }
  auto p2 = io::write_csv(opt.out_dir, "v0_small_r.csv",
                          {{"r", rs}, {"v0", v0s}, {"asymptotic", v0pred}});
  manifest.add_file(p2);
  manifest.write(opt.out_dir);
  say(opt, "v0=" + std::to_string(pd.v0()) + " backend=" +
               (pd.backend() == PotentialBackend::ClosedForm ? "closed_form"
                                                             : "quadrature"));
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg, const CmdOptions& opt) {
  auto cache_dir = opt.out_dir / "cache";
  auto cache_file = cache_dir / ("spectrum_" + config_hash(cfg) + ".json");
  io::Manifest manifest(cfg.canonical(), kVersion);

  if (cfg.cache && std::filesystem::exists(cache_file)) {
    std::ifstream in(cache_file);
    json j = json::parse(in);
    emit_spectrum_files(cfg, opt, j, manifest);
    manifest.write(opt.out_dir);
    std::ostringstream os;
    os.precision(10);
    os << "gamma=" << j["gamma"].get<double>()
       << " E=" << j["free_energy"].get<double>()
       << " gap=" << j["spectral_gap"].get<double>()
       << " C=" << j["correlation_rate"].get<double>() << " (cache)";
    say(opt, os.str());
    return kOk;
  }

  auto mass = cfg.make_mass();
  Grid grid = cfg.make_grid(mass);
  auto op = make_operator(cfg, opt, mass, grid);
  auto sol = solve_spectrum(op, cfg.spectrum_k);
  json j = solution_to_json(cfg, sol);
  emit_spectrum_files(cfg, opt, j, manifest);
  if (cfg.cache)
    io::write_text(cache_dir, cache_file.filename().string(), j.dump() + "\n");
  manifest.write(opt.out_dir);
  say(opt, summary_line(sol));
  return kOk;
}

int cmd_partition(const RunConfig& cfg, const CmdOptions& opt) {
  auto mass = cfg.make_mass();
  Grid grid = cfg.make_grid(mass);
  auto op = make_operator(cfg, opt, mass, grid);
  auto sol = solve_spectrum(op, std::min(cfg.spectrum_k, 8));

  io::Manifest manifest(cfg.canonical(), kVersion);
  std::vector<double> ns, zns, znfs, fes;
  for (int n = 2; n <= cfg.zn_max; ++n) {
    double lz = log_zn_trace(*op, n);
    double lzf = log_zn_free(*op, n);
    ns.push_back(n);
    zns.push_back(std::exp(lz));
    znfs.push_back(std::exp(lzf));
    fes.push_back(-lz / n);
  }
  auto p = io::write_csv(
      opt.out_dir, "zn_table.csv",
      {{"n", ns}, {"Zn", zns}, {"Znf", znfs}, {"minus_logZn_over_n", fes}});
  manifest.add_file(p);

  json j;
  j["free_energy_spectral"] = sol.free_energy();
  j["free_energy_at_nmax"] = fes.back();
  if (mass.in_l1()) {
    double z2t = zn_trace(*op, 2);
    double z2d = z2_direct(op->model(), mass, cfg.kill_rate, grid);
    double z2f = zhat2_dual(op->model(), mass, cfg.kill_rate);
    j["z2"] = {{"trace", z2t}, {"direct", z2d}, {"fourier_dual", z2f}};
    auto b = eigen_bounds(*op, sol.gamma());
    j["bounds"] = {{"lower", b.lower},
                   {"lambda1", b.lambda1},
                   {"upper", b.upper},
                   {"pass", b.pass}};
  }
  auto pj = io::write_text(opt.out_dir, "partition.json", j.dump(2) + "\n");
  manifest.add_file(pj);
  manifest.write(opt.out_dir);
  say(opt, "E(spectral)=" + std::to_string(sol.free_energy()) +
               "  -logZn/n@" + std::to_string(cfg.zn_max) + "=" +
               std::to_string(fes.back()));
  return kOk;
}

int cmd_moments(const RunConfig& cfg, const CmdOptions& opt) {
  auto mass = cfg.make_mass();
  Grid grid = cfg.make_grid(mass);
  auto op = make_operator(cfg, opt, mass, grid);
  auto zm = zeta_moments(*op, 0.0, 30);

  io::Manifest manifest(cfg.canonical(), kVersion);
  std::vector<double> ns, moments, hadamard;
  for (size_t i = 0; i < zm.moments.size(); ++i) {
    ns.push_back(static_cast<double>(i + 1));
    moments.push_back(zm.moments[i]);
    hadamard.push_back(zm.hadamard[i]);
  }
  auto p = io::write_csv(opt.out_dir, "zeta_moments.csv",
                         {{"n", ns},
                          {"moment", moments},
                          {"hadamard_root", hadamard}});
  manifest.add_file(p);
  manifest.write(opt.out_dir);
  say(opt, "E[zeta_0]=" + std::to_string(zm.moments[0]) +
               " (direct " + std::to_string(zm.first_moment_direct) + ")");
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, const CmdOptions& opt) {
  auto model = cfg.make_model();
  auto mass = cfg.make_mass();
  mc::PathConfig pc;
  pc.dt = cfg.mc_dt;
  pc.seed = effective_seed(cfg, opt);
  pc.n_paths = cfg.mc_paths;

  // scale the time grid from the mean survival time
  Grid grid = cfg.make_grid(mass);
  KernelOperator op(model, mass, cfg.kill_rate, grid);
  auto zm = zeta_moments(op, 0.0, 1);
  double t_max =
      1.2 * zm.moments[0] * std::log(std::max(4.0, pc.n_paths / 400.0));
  std::vector<double> t_grid;
  for (int i = 0; i <= 32; ++i) t_grid.push_back(t_max * i / 32.0);

  // sample-quantile fit window
  auto est = mc::estimate_survival(model, mass, cfg.kill_rate, 0.0, t_grid, pc,
                                   0.0, -1.0);
  io::Manifest manifest(cfg.canonical(), kVersion);
  auto p = io::write_csv(
      opt.out_dir, "survival.csv",
      {{"t", est.t}, {"p", est.prob}, {"lo", est.lo}, {"hi", est.hi}});
  manifest.add_file(p);
  auto p2 = io::write_csv(opt.out_dir, "zeta_moments_mc.csv",
                          {{"n", {1.0}},
                           {"estimate", {est.zeta_mean}},
                           {"stderr", {est.zeta_mean_stderr}}});
  manifest.add_file(p2);
  manifest.write(opt.out_dir);
  std::ostringstream os;
  os << "gamma_hat=" << est.gamma_hat << " +- " << est.gamma_stderr
     << "  E[zeta]=" << est.zeta_mean << "  capped=" << est.capped;
  say(opt, os.str());
  return kOk;
}

int cmd_gibbs(const RunConfig& cfg, const CmdOptions& opt) {
  auto model = cfg.make_model();
  auto mass = cfg.make_mass();
  mc::McmcConfig mcfg;
  mcfg.sweeps = cfg.mcmc_sweeps;
  mcfg.chains = cfg.mcmc_chains;
  mcfg.seed = effective_seed(cfg, opt);
  mcfg.k_list = {1, 2, 3, 4, 5, 6, 7, 8};
  mcfg.obs_f = bump_observable;
  mcfg.obs_g = bump_observable;
  auto st = mc::gibbs_mcmc(model, mass, cfg.kill_rate, cfg.mcmc_ring_n, mcfg);

  io::Manifest manifest(cfg.canonical(), kVersion);
  auto density = mc::histogram_density(st);
  std::vector<double> centers(density.size());
  for (size_t i = 0; i < density.size(); ++i)
    centers[i] = st.hist_lo + (i + 0.5) * st.bin;
  auto p = io::write_csv(opt.out_dir, "spin_hist.csv",
                         {{"bin_center", centers}, {"density", density}});
  manifest.add_file(p);

  auto corr = mc::mcmc_correlations(st);
  std::vector<double> ks, cks, errs;
  for (const auto& c : corr.points) {
    ks.push_back(c.k);
    cks.push_back(c.value);
    errs.push_back(c.stderr_value);
  }
  auto p2 = io::write_csv(opt.out_dir, "corr_mc.csv",
                          {{"k", ks}, {"Ck", cks}, {"err", errs}});
  manifest.add_file(p2);
  manifest.write(opt.out_dir);
  std::ostringstream os;
  os << "acceptance=" << st.acceptance << " scale=" << st.proposal_scale
     << " fitted_rate=" << corr.fitted_rate;
  say(opt, os.str());
  return kOk;
}

int cmd_smallr(const RunConfig& cfg, const CmdOptions& opt) {
  auto model = cfg.make_model();
  auto mass = cfg.make_mass();
  auto study = small_r_study(model, mass, cfg.smallr_list);

  io::Manifest manifest(cfg.canonical(), kVersion);
  std::vector<double> rs, gs, ps, ratios;
  for (const auto& row : study.rows) {
    rs.push_back(row.r);
    gs.push_back(row.gamma);
    ps.push_back(row.prediction);
    ratios.push_back(row.ratio);
  }
  auto p = io::write_csv(
      opt.out_dir, "small_r.csv",
      {{"r", rs}, {"gamma", gs}, {"prediction", ps}, {"ratio", ratios}});
  manifest.add_file(p);
  manifest.write(opt.out_dir);
  say(opt, "fitted exponent = " + std::to_string(study.fitted_exponent));
  return kOk;
}

VerifyReport run_verify_battery(const RunConfig& cfg, const CmdOptions& opt) {
  VerifyReport rep;
  auto push = [&rep](std::string name, bool pass, std::string detail,
                     bool skipped = false) {
    rep.checks.push_back({std::move(name), pass, skipped, std::move(detail)});
  };
  // a check that throws is a failed check, not a dead battery
  auto guarded = [&push](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      push(name, false, std::string("threw: ") + e.what());
    }
  };
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(8);
    os << v;
    return os.str();
  };

  auto model = cfg.make_model();
  auto mass = cfg.make_mass();
  Grid grid = cfg.make_grid(mass);
  auto op = make_operator(cfg, opt, mass, grid);
  double r = cfg.kill_rate;

  // potential mass identity \int v = 1/r
  guarded("potential_mass", [&] {
    const auto& pd = op->potential();
    double half = std::max(grid.L, 60.0);
    double got = potential_l1_check(pd, half);
    double tail = pd.tail_mass_bound(half);
    bool ok = got <= 1.0 / r + 1e-6 / r && got >= 1.0 / r - tail - 1e-4 / r;
    push("potential_mass", ok,
         "integral " + fmt(got) + " vs 1/r " + fmt(1.0 / r) + " (tail bound " +
             fmt(tail) + ")");
  });

  auto sol = solve_spectrum(op, cfg.spectrum_k);

  // kernel symmetry (spot entries; the lag construction is symmetric)
  {
    bool ok = true;
    for (int i = 0; i < grid.N; i += std::max(1, grid.N / 17))
      for (int j = 0; j < grid.N; j += std::max(1, grid.N / 13))
        if (op->entry(i, j) != op->entry(j, i)) ok = false;
    push("kernel_symmetry", ok, ok ? "S(i,j) == S(j,i)" : "asymmetry found");
  }

  // positivity of the retained spectrum and the ground state
  {
    bool ok = true;
    for (int n = 1; n <= sol.retained(); ++n)
      if (!(1.0 / sol.lambda(n) > 0.0)) ok = false;
    push("eigen_positive", ok, "top-" + std::to_string(sol.retained()));
    auto [slo, shi] = sol.q1_support();
    double qmin = 1e300, qmax = 0.0;
    for (int i = slo; i <= shi; ++i) qmin = std::min(qmin, sol.q(1)[i]);
    for (double v : sol.q(1)) qmax = std::max(qmax, v);
    bool no_lobe = true;
    for (double v : sol.q(1))
      if (v < -1e-10 * qmax) no_lobe = false;
    push("q1_positive", qmin > 0.0 && no_lobe,
         "min q1 on support = " + fmt(qmin));
  }

  // L2(m)-orthonormality of the retained eigenfunctions
  {
    double worst = 0.0;
    const auto& m = op->mass_values();
    for (int a = 1; a <= sol.retained(); ++a)
      for (int b = a; b <= sol.retained(); ++b) {
        double g = 0.0;
        for (int i = 0; i < grid.N; ++i)
          g += grid.w(i) * m[i] * sol.q(a)[i] * sol.q(b)[i];
        worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
      }
    push("orthonormality", worst < 1e-6, "max Gram defect " + fmt(worst));
  }

  // gap identity c = e^E (e^C - 1)
  {
    double lhs = sol.spectral_gap();
    double rhs = std::exp(sol.free_energy()) *
                 (std::exp(sol.correlation_rate()) - 1.0);
    bool ok = std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs));
    push("gap_identity", ok, fmt(lhs) + " vs " + fmt(rhs));
  }

  // trace identities and Z2 triple (L1 masses)
  if (mass.in_l1()) {
    double tr = 0.0;
    for (double m : op->full_spectrum(2).mu) tr += m;
    double target = op->v0() * mass.l1_norm();
    double rel = std::abs(tr - target) / target;
    push("trace_identity_l1", rel < 1e-2,
         "sum mu = " + fmt(tr) + " vs v0*||m||_1 = " + fmt(target) +
             " (rel " + fmt(rel) + ")");

    double z2t = zn_trace(*op, 2);
    // the direct route runs on its own refined grid so the comparison
    // is not vacuous
    double z2d = z2_direct(model, mass, r, Grid(grid.L, 2 * grid.N - 1));
    double z2f = zhat2_dual(model, mass, r);
    double worst = std::max(std::abs(z2t - z2d) / z2d,
                            std::max(std::abs(z2t - z2f) / z2f,
                                     std::abs(z2d - z2f) / z2f));
    push("z2_triple", worst < 5e-3,
         "trace " + fmt(z2t) + ", direct " + fmt(z2d) + ", dual " + fmt(z2f));

    auto b = eigen_bounds(*op, sol.gamma());
    push("eigen_bounds", b.pass,
         fmt(b.lower) + " <= " + fmt(b.lambda1) + " <= " + fmt(b.upper));
  } else {
    push("trace_identity_l1", true, "mass not integrable", true);
    push("z2_triple", true, "mass not integrable", true);
    push("eigen_bounds", true, "mass not integrable", true);
  }

  // free-energy convergence and the free-boundary inequality
  {
    int nmax = cfg.zn_max;
    double fe = -log_zn_trace(*op, nmax) / nmax;
    double dev = std::abs(fe - sol.free_energy());
    push("free_energy_zn", dev < 1e-2,
         "-logZn/n = " + fmt(fe) + " vs E = " + fmt(sol.free_energy()));
    bool ineq = true;
    for (int n = 2; n <= std::min(nmax, 16); ++n)
      if (log_zn_trace(*op, n) > std::log(op->v0()) + log_zn_free(*op, n))
        ineq = false;
    push("zn_le_v0_znf", ineq, "Z_n <= v0 Z^f_n for n <= 16");
  }

  // trivial bound on the decay rate
  {
    double lower = r / mass.linf_norm();
    push("survival_trivial_bound", sol.gamma() >= lower - 1e-9,
         "gamma " + fmt(sol.gamma()) + " >= r/||m||_inf " + fmt(lower));
  }

  // Monte Carlo vs spectral survival + mean
  guarded("survival_mc_vs_spectral", [&] {
    mc::PathConfig pc;
    pc.dt = cfg.mc_dt;
    pc.seed = effective_seed(cfg, opt);
    pc.n_paths = cfg.mc_paths;
    auto zm = zeta_moments(*op, 0.0, 1);
    double t_star = 2.0 * zm.moments[0];
    double t_hi = zm.moments[0] * std::log(std::max(4.0, pc.n_paths / 400.0));
    double t_max = std::max(1.2 * t_hi, t_star * 1.2);
    std::vector<double> t_grid;
    for (int i = 0; i <= 24; ++i) t_grid.push_back(t_max * i / 24.0);
    auto est = mc::estimate_survival(model, mass, r, 0.0, t_grid, pc,
                                     0.0, -1.0);
    int istar = 0;
    for (size_t i = 0; i < t_grid.size(); ++i)
      if (std::abs(t_grid[i] - t_star) < std::abs(t_grid[istar] - t_star))
        istar = static_cast<int>(i);
    auto sv = survival_probability(sol, 0.0, t_grid[istar], sol.retained());
    double p_hat = est.prob[istar];
    double sigma = 0.5 * (est.hi[istar] - est.lo[istar]) / 1.96;
    double gap = std::abs(p_hat - sv.probability);
    push("survival_mc_vs_spectral",
         gap <= 3.0 * sigma + sv.truncation_bound + 1e-4,
         "t=" + fmt(t_grid[istar]) + " mc " + fmt(p_hat) + " spectral " +
             fmt(sv.probability) + " (3sigma " + fmt(3.0 * sigma) + ")");
    double grel = std::abs(est.gamma_hat - sol.gamma()) / sol.gamma();
    push("survival_rate_fit", grel < 0.08,
         "gamma_hat " + fmt(est.gamma_hat) + " vs " + fmt(sol.gamma()));
    double mean_rel = std::abs(est.zeta_mean - zm.first_moment_direct) /
                      zm.first_moment_direct;
    push("zeta_mean_mc", mean_rel < 0.02 + 3.0 * est.zeta_mean_stderr /
                                               zm.first_moment_direct,
         "mc " + fmt(est.zeta_mean) + " vs quadrature " +
             fmt(zm.first_moment_direct));
  });

  // spin system: single-site density and correlation decay
  guarded("gibbs_single_site_tv", [&] {
    mc::McmcConfig mcfg;
    mcfg.sweeps = cfg.mcmc_sweeps;
    mcfg.chains = cfg.mcmc_chains;
    mcfg.seed = effective_seed(cfg, opt);
    mcfg.k_list = {1, 2, 3, 4, 5, 6, 7, 8};
    mcfg.obs_f = bump_observable;
    mcfg.obs_g = bump_observable;
    auto st = mc::gibbs_mcmc(model, mass, r, cfg.mcmc_ring_n, mcfg);

    int nbins = static_cast<int>(st.hist.size());
    std::vector<double> emp(nbins);
    for (int i = 0; i < nbins; ++i)
      emp[i] = st.hist[i] / static_cast<double>(st.hist_samples);
    auto ell1_mass =
        bin_grid_density(grid, sol.ell1(), st.hist_lo, st.bin, nbins);
    double tv = tv_distance(emp, ell1_mass);
    push("gibbs_single_site_tv", tv < 0.05, "TV = " + fmt(tv));

    auto corr = mc::mcmc_correlations(st);
    double c_ref = sol.correlation_rate();
    bool have = corr.points.size() >= 2 && corr.fitted_rate > 0.0;
    double rel = have ? std::abs(corr.fitted_rate - c_ref) / c_ref : 1.0;
    push("mcmc_correlation_rate", have && rel < 0.15,
         "fitted " + fmt(corr.fitted_rate) + " vs C " + fmt(c_ref));
  });

  // ground-state chain: stationarity and the (Y0, Y1) law
  guarded("groundstate_chain", [&] {
    auto gk = groundstate_transition(sol);
    push("groundstate_rows", gk.max_row_drift < 1e-3,
         "max raw row drift " + fmt(gk.max_row_drift));

    // deterministic stationarity: || pi^T T - pi ||_TV
    auto pi = gk.stationary();
    std::vector<double> piT(grid.N, 0.0);
    for (int i = gk.support_lo; i <= gk.support_hi; ++i) {
      auto row = gk.row(i);
      for (int j = 0; j < grid.N; ++j) piT[j] += pi[i] * row[j];
    }
    double tv = 0.0;
    for (int j = 0; j < grid.N; ++j) tv += std::abs(piT[j] - pi[j]);
    tv *= 0.5;
    push("groundstate_stationarity", tv < 1e-4, "TV drift " + fmt(tv));

    long nsamp = std::min<long>(cfg.mc_paths, 100000);
    auto samples =
        mc::sample_groundstate_chain(gk, 1, nsamp, effective_seed(cfg, opt));
    // coarse 2D binning of (Y0, Y1) against ell_2
    double blo = -5.0, bw = 0.5;
    int nb = 20;
    std::vector<double> emp(nb * nb, 0.0), ref(nb * nb, 0.0);
    for (const auto& s : samples) {
      int b0 = static_cast<int>(std::floor((grid.x(s[0]) - blo) / bw));
      int b1 = static_cast<int>(std::floor((grid.x(s[1]) - blo) / bw));
      if (b0 >= 0 && b0 < nb && b1 >= 0 && b1 < nb)
        emp[b0 * nb + b1] += 1.0 / nsamp;
    }
    auto l2 = gibbs_state_density(sol, 2);
    for (int i = 0; i < grid.N; ++i) {
      int b0 = static_cast<int>(std::floor((grid.x(i) - blo) / bw));
      if (b0 < 0 || b0 >= nb) continue;
      for (int j = 0; j < grid.N; ++j) {
        int b1 = static_cast<int>(std::floor((grid.x(j) - blo) / bw));
        if (b1 < 0 || b1 >= nb) continue;
        ref[b0 * nb + b1] += grid.w(i) * grid.w(j) * l2.at_nodes({i, j});
      }
    }
    double tv2 = tv_distance(emp, ref);
    push("groundstate_joint_tv", tv2 < 0.05, "TV = " + fmt(tv2));
  });

  // small-r scaling (needs an L1 mass for the prediction)
  if (mass.in_l1() && cfg.smallr_list.size() >= 2) {
    guarded("smallr_monotone", [&] {
    auto study = small_r_study(model, mass, cfg.smallr_list);
    bool monotone = true;
    for (size_t i = 1; i < study.rows.size(); ++i)
      if (std::abs(study.rows[i].ratio - 1.0) >
          std::abs(study.rows[i - 1].ratio - 1.0) + 1e-9)
        monotone = false;
    std::ostringstream os;
    for (const auto& row : study.rows) os << fmt(row.ratio) << " ";
    push("smallr_monotone", monotone, "ratios " + os.str());
    });
  } else {
    push("smallr_monotone", true, "needs L1 mass and an r-list", true);
  }

  return rep;
}

int cmd_verify(const RunConfig& cfg, const CmdOptions& opt) {
  auto rep = run_verify_battery(cfg, opt);
  json j;
  auto arr = json::array();
  for (const auto& c : rep.checks) {
    arr.push_back({{"name", c.name},
                   {"pass", c.pass},
                   {"skipped", c.skipped},
                   {"detail", c.detail}});
    say(opt, std::string(c.skipped ? "[skip] " : (c.pass ? "[ ok ] " : "[FAIL] ")) +
                 c.name + ": " + c.detail);
  }
  j["checks"] = arr;
  j["all_pass"] = rep.all_pass();
  io::write_text(opt.out_dir, "verify.json", j.dump(2) + "\n");
  return rep.all_pass() ? kOk : kVerifyFailed;
}

}  // namespace levyspec::cli
