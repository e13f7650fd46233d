#include "levyspec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <thread>

#include "levyspec/errors.hpp"
#include "levyspec/numerics.hpp"
#include "levyspec/potential.hpp"

namespace levyspec::mc {

namespace {
constexpr double kPi = std::numbers::pi;

std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t worker) {
  return std::mt19937_64(num::splitmix64(master ^ (0xA5A5A5A5A5A5A5A5ULL +
                                                   worker * 0x9E3779B97F4A7C15ULL)));
}

}  // namespace

double stable_standard_sample(double alpha, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-0.5 * kPi, 0.5 * kPi);
  std::exponential_distribution<double> expo(1.0);
  double U = unif(rng);
  double W = expo(rng);
  double s = std::sin(alpha * U) / std::pow(std::cos(U), 1.0 / alpha);
  double t = std::pow(std::cos((alpha - 1.0) * U) / W, (1.0 - alpha) / alpha);
  return s * t;
}

namespace {

struct StepSampler {
  const LevyModel* model;
  double dt;
  double sqrt_A_dt = 0.0;
  double stable_scale_dt = 0.0;
  double jump_mean = 0.0;

  StepSampler(const LevyModel& m, double step) : model(&m), dt(step) {
    if (m.kind() == LevyKind::SymmetricStable) {
      stable_scale_dt = std::pow(m.stable_scale() * dt, 1.0 / m.stable_index());
    } else {
      sqrt_A_dt = std::sqrt(m.gaussian_coefficient() * dt);
      jump_mean = m.jump_rate() * dt;
    }
  }

  /// Exact-in-law increment over a step of length `len` (<= dt).
  double increment(double len, std::mt19937_64& rng) const {
    if (model->kind() == LevyKind::SymmetricStable) {
      double scale = len == dt ? stable_scale_dt
                               : std::pow(model->stable_scale() * len,
                                          1.0 / model->stable_index());
      return scale * stable_standard_sample(model->stable_index(), rng);
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    double dx = (len == dt ? sqrt_A_dt
                           : std::sqrt(model->gaussian_coefficient() * len)) *
                gauss(rng);
    if (model->jump_rate() > 0.0) {
      std::poisson_distribution<int> pois(model->jump_rate() * len);
      int n = pois(rng);
      for (int j = 0; j < n; ++j) {
        if (model->jump_kind() == JumpKind::TwoPoint) {
          dx += (rng() & 1ULL) ? model->jump_param() : -model->jump_param();
        } else {
          dx += model->jump_param() * gauss(rng);
        }
      }
    }
    return dx;
  }
};

struct PathResult {
  double zeta;
  double er;
  bool capped;
};

PathResult one_path(const LevyModel&, const MassFunction& mass, double r,
                    double x, const PathConfig& cfg, const StepSampler& step,
                    std::uint64_t path_index) {
  auto rng = stream_rng(cfg.seed, path_index);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  double er = -std::log(1.0 - unif01(rng)) / r;
  double t_cap = cfg.t_cap_factor / r;
  bool capped = false;
  if (er > t_cap) {
    er = t_cap;
    capped = true;
  }

  double xi = 0.0;
  double m_prev = mass(x);
  double clock = 0.0;
  double t = 0.0;
  while (t + cfg.dt <= er) {
    xi += step.increment(cfg.dt, rng);
    double m_cur = mass(x + xi);
    clock += 0.5 * cfg.dt * (m_prev + m_cur);
    m_prev = m_cur;
    t += cfg.dt;
  }
  double rest = er - t;
  if (rest > 0.0) {
    xi += step.increment(rest, rng);
    double m_cur = mass(x + xi);
    clock += 0.5 * rest * (m_prev + m_cur);
  }
  return {clock, er, capped};
}

}  // namespace

ZetaBatch simulate_zeta(const LevyModel& model, const MassFunction& mass,
                        double r, double x, const PathConfig& cfg) {
  if (!(cfg.dt > 0.0) || cfg.dt > 1e-2 + 1e-15)
    throw Error("PathConfig: dt must lie in (0, 1e-2]");
  if (!(cfg.t_cap_factor >= 18.5))
    throw Error("PathConfig: T_cap too small for the capping budget");
  StepSampler step(model, cfg.dt);

  ZetaBatch batch;
  batch.zeta.resize(cfg.n_paths);
  batch.er.resize(cfg.n_paths);
  std::vector<char> capped(cfg.n_paths, 0);

  unsigned hw = std::thread::hardware_concurrency();
  int workers = std::max(1u, hw);
  std::vector<std::future<void>> jobs;
  long chunk = (cfg.n_paths + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    long lo = w * chunk, hi = std::min<long>(cfg.n_paths, lo + chunk);
    if (lo >= hi) break;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (long i = lo; i < hi; ++i) {
        auto res = one_path(model, mass, r, x, cfg, step,
                            static_cast<std::uint64_t>(i));
        batch.zeta[i] = res.zeta;
        batch.er[i] = res.er;
        capped[i] = res.capped ? 1 : 0;
      }
    }));
  }
  for (auto& j : jobs) j.get();
  for (char c : capped) batch.capped += c;

  double s = 0.0, s2 = 0.0;
  for (double z : batch.zeta) {
    s += z;
    s2 += z * z;
  }
  double n = static_cast<double>(cfg.n_paths);
  batch.mean = s / n;
  batch.stderr_mean = std::sqrt(std::max(0.0, s2 / n - batch.mean * batch.mean) / n);
  return batch;
}

SurvivalEstimate estimate_survival(const LevyModel& model,
                                   const MassFunction& mass, double r,
                                   double x, const std::vector<double>& t_grid,
                                   const PathConfig& cfg, double fit_lo,
                                   double fit_hi) {
  ZetaBatch batch = simulate_zeta(model, mass, r, x, cfg);
  std::vector<double> sorted = batch.zeta;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  if (fit_hi <= 0.0) {
    size_t keep = std::min<size_t>(500, sorted.size() / 4 + 1);
    fit_hi = sorted[sorted.size() - keep];
    fit_lo = fit_hi / 3.0;
  }

  SurvivalEstimate est;
  est.t = t_grid;
  est.n_paths = cfg.n_paths;
  est.capped = batch.capped;
  est.zeta_mean = batch.mean;
  est.zeta_mean_stderr = batch.stderr_mean;

  std::vector<double> fx, fy, fw;
  long survivors_at_fit_hi = 0;
  for (double t : t_grid) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    long survivors = sorted.end() - it;
    double p = survivors / n;
    est.prob.push_back(p);
    auto ci = num::wilson_interval(survivors, static_cast<long>(n));
    est.lo.push_back(ci.lo);
    est.hi.push_back(ci.hi);
    if (t >= fit_lo && t <= fit_hi && survivors > 0) {
      fx.push_back(t);
      fy.push_back(std::log(p));
      fw.push_back(static_cast<double>(survivors));
      survivors_at_fit_hi = survivors;
    }
  }
  if (fx.size() >= 2) {
    if (survivors_at_fit_hi < 200)
      throw InsufficientTail("only " + std::to_string(survivors_at_fit_hi) +
                             " survivors at the top of the fit window");
    auto fit = num::fit_line(fx, fy, fw);
    est.gamma_hat = -fit.slope;
    est.gamma_stderr = fit.slope_stderr;
  }
  return est;
}

std::vector<std::vector<int>> sample_groundstate_chain(
    const GroundStateKernel& kernel, int k, long n_samples,
    std::uint64_t seed) {
  const int N = kernel.size();
  auto pi = kernel.stationary();
  std::vector<double> cdf0(N);
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    acc += pi[i];
    cdf0[i] = acc;
  }

  // Row CDFs built on demand; visited rows concentrate where ell_1 lives.
  std::vector<std::vector<double>> row_cdf(N);
  auto ensure_row = [&](int i) -> const std::vector<double>& {
    if (row_cdf[i].empty()) {
      auto row = kernel.row(i);
      row_cdf[i].resize(N);
      double a = 0.0;
      for (int j = 0; j < N; ++j) {
        a += row[j];
        row_cdf[i][j] = a;
      }
    }
    return row_cdf[i];
  };

  auto draw = [](const std::vector<double>& cdf, double u) {
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  };

  std::vector<std::vector<int>> samples(n_samples, std::vector<int>(k + 1));
  auto rng = stream_rng(seed, 0x636861696eULL);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  for (long s = 0; s < n_samples; ++s) {
    int cur = draw(cdf0, unif01(rng));
    samples[s][0] = cur;
    for (int step = 1; step <= k; ++step) {
      cur = draw(ensure_row(cur), unif01(rng));
      samples[s][step] = cur;
    }
  }
  return samples;
}

double metropolis_accept_prob(double delta_energy) {
  return delta_energy <= 0.0 ? 1.0 : std::exp(-delta_energy);
}

namespace {

struct SpinPotentials {
  std::function<double(double)> vint;   // -log v^r
  std::function<double(double)> umass;  // -log m
};

SpinPotentials make_potentials(const LevyModel& model, const MassFunction& mass,
                               double r) {
  SpinPotentials pot;
  PotentialDensity pd(model, r);
  if (pd.backend() == PotentialBackend::ClosedForm) {
    double A = model.gaussian_coefficient();
    double decay = std::sqrt(2.0 * r / A);
    double offset = 0.5 * std::log(2.0 * r * A);
    pot.vint = [decay, offset](double x) {
      return decay * std::abs(x) + offset;
    };
  } else {
    auto table = std::make_shared<PotentialTable>(pd, 400.0, 20001);
    pot.vint = [table](double x) { return -table->log_value(x); };
  }
  pot.umass = [mass](double x) { return -std::log(mass(x)); };
  return pot;
}

struct ChainResult {
  std::vector<double> hist;
  long hist_samples = 0;
  long hist_outside = 0;
  std::vector<std::vector<double>> fg_batches;
  std::vector<double> f_batches, g_batches;
  double acceptance = 0.0;
  double scale = 0.0;
  double f_mean = 0.0;
};

ChainResult run_chain(const SpinPotentials& pot, int n, long sweeps,
                      const McmcConfig& cfg, int chain_id, int nbins) {
  ChainResult out;
  out.hist.assign(nbins, 0.0);
  int nk = static_cast<int>(cfg.k_list.size());
  out.fg_batches.assign(nk, std::vector<double>(cfg.batches_per_chain, 0.0));
  out.f_batches.assign(cfg.batches_per_chain, 0.0);
  out.g_batches.assign(cfg.batches_per_chain, 0.0);
  std::vector<long> batch_count(cfg.batches_per_chain, 0);

  auto rng = stream_rng(cfg.seed, 0x636861696eULL + chain_id);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> spins(n, 0.0);  // mode-adjacent start
  double scale = cfg.initial_scale;

  long accepted = 0, proposed = 0;
  long tune_accepted = 0, tune_proposed = 0;

  // The gradient interactions are translation invariant, so the
  // collective shift of the whole ring relaxes only through the weak
  // pinning term and dominates the autocorrelation time. One global
  // shift proposal per sweep (only the pinning enters its energy
  // difference) keeps that mode mixing.
  auto global_shift = [&] {
    double delta = scale * gauss(rng);
    double dh = 0.0;
    for (int j = 0; j < n; ++j)
      dh += pot.umass(spins[j] + delta) - pot.umass(spins[j]);
    if (std::isfinite(dh) && unif01(rng) < metropolis_accept_prob(dh))
      for (int j = 0; j < n; ++j) spins[j] += delta;
  };

  auto sweep_once = [&](bool tuning) {
    for (int j = 0; j < n; ++j) {
      double old = spins[j];
      double prop = old + scale * gauss(rng);
      double left = spins[(j + n - 1) % n];
      double right = spins[(j + 1) % n];
      double dh = pot.umass(prop) - pot.umass(old);
      dh += pot.vint(prop - left) - pot.vint(old - left);
      dh += pot.vint(right - prop) - pot.vint(right - old);
      ++proposed;
      if (tuning) ++tune_proposed;
      if (std::isfinite(dh) && unif01(rng) < metropolis_accept_prob(dh)) {
        spins[j] = prop;
        ++accepted;
        if (tuning) ++tune_accepted;
      }
    }
    global_shift();
  };

  for (long s = 0; s < cfg.burn_in; ++s) {
    sweep_once(true);
    if ((s + 1) % 500 == 0 && tune_proposed > 0) {
      double acc = static_cast<double>(tune_accepted) / tune_proposed;
      scale *= std::exp(acc - cfg.target_acceptance);
      scale = std::clamp(scale, 1e-3, 1e3);
      tune_accepted = tune_proposed = 0;
    }
  }
  accepted = proposed = 0;

  for (long s = 0; s < sweeps; ++s) {
    sweep_once(false);
    int batch = static_cast<int>((s * cfg.batches_per_chain) / sweeps);
    double favg = 0.0, gavg = 0.0;
    for (int j = 0; j < n; ++j) {
      double w = spins[j];
      int bin = static_cast<int>(std::floor((w + cfg.hist_halfwidth) / cfg.hist_bin));
      if (bin >= 0 && bin < nbins)
        out.hist[bin] += 1.0;
      else
        ++out.hist_outside;
      ++out.hist_samples;
      if (nk > 0) {
        favg += cfg.obs_f(w);
        gavg += cfg.obs_g(w);
      }
    }
    if (nk > 0) {
      favg /= n;
      gavg /= n;
      out.f_batches[batch] += favg;
      out.g_batches[batch] += gavg;
      for (int ki = 0; ki < nk; ++ki) {
        int k = cfg.k_list[ki];
        double pair = 0.0;
        for (int j = 0; j < n; ++j)
          pair += cfg.obs_f(spins[j]) * cfg.obs_g(spins[(j + k) % n]);
        out.fg_batches[ki][batch] += pair / n;
      }
      ++batch_count[batch];
    }
  }

  for (int b = 0; b < cfg.batches_per_chain; ++b) {
    if (batch_count[b] > 0) {
      out.f_batches[b] /= batch_count[b];
      out.g_batches[b] /= batch_count[b];
      for (int ki = 0; ki < nk; ++ki) out.fg_batches[ki][b] /= batch_count[b];
    }
  }
  out.acceptance = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
  out.scale = scale;
  double fsum = 0.0;
  for (double fb : out.f_batches) fsum += fb;
  out.f_mean = cfg.batches_per_chain > 0 ? fsum / cfg.batches_per_chain : 0.0;
  return out;
}

}  // namespace

double spin_energy(const LevyModel& model, const MassFunction& mass, double r,
                   const std::vector<double>& spins) {
  auto pot = make_potentials(model, mass, r);
  const int n = static_cast<int>(spins.size());
  if (n < 2) throw Error("spin_energy: ring needs n >= 2");
  double h = 0.0;
  for (int j = 0; j < n; ++j) {
    h += pot.umass(spins[j]);
    h += pot.vint(spins[(j + 1) % n] - spins[j]);
  }
  return h;
}

SpinChainState gibbs_mcmc(const LevyModel& model, const MassFunction& mass,
                          double r, int ring_n, const McmcConfig& cfg) {
  if (ring_n < 2) throw Error("gibbs_mcmc: ring needs n >= 2");
  if (!cfg.k_list.empty() && (!cfg.obs_f || !cfg.obs_g))
    throw Error("gibbs_mcmc: pair distances require both observables");
  auto pot = make_potentials(model, mass, r);

  int nbins = static_cast<int>(std::ceil(2.0 * cfg.hist_halfwidth / cfg.hist_bin));
  long per_chain = cfg.sweeps / cfg.chains;

  std::vector<std::future<ChainResult>> jobs;
  for (int c = 0; c < cfg.chains; ++c)
    jobs.push_back(std::async(std::launch::async, [&, c] {
      return run_chain(pot, ring_n, per_chain, cfg, c, nbins);
    }));

  SpinChainState st;
  st.ring_n = ring_n;
  st.sweeps_total = per_chain * cfg.chains;
  st.hist.assign(nbins, 0.0);
  st.hist_lo = -cfg.hist_halfwidth;
  st.bin = cfg.hist_bin;
  st.k_list = cfg.k_list;
  st.fg_batches.assign(cfg.k_list.size(), {});
  st.proposal_scale = 0.0;

  std::vector<double> chain_means;
  double acc = 0.0;
  for (auto& j : jobs) {
    ChainResult res = j.get();
    for (int b = 0; b < nbins; ++b) st.hist[b] += res.hist[b];
    st.hist_samples += res.hist_samples;
    st.hist_outside += res.hist_outside;
    for (size_t ki = 0; ki < st.k_list.size(); ++ki)
      st.fg_batches[ki].insert(st.fg_batches[ki].end(),
                               res.fg_batches[ki].begin(),
                               res.fg_batches[ki].end());
    st.f_batches.insert(st.f_batches.end(), res.f_batches.begin(),
                        res.f_batches.end());
    st.g_batches.insert(st.g_batches.end(), res.g_batches.begin(),
                        res.g_batches.end());
    acc += res.acceptance;
    st.proposal_scale += res.scale;
    chain_means.push_back(res.f_mean);
  }
  st.acceptance = acc / cfg.chains;
  st.proposal_scale /= cfg.chains;
  if (st.acceptance < 0.15 || st.acceptance > 0.6)
    throw AcceptanceOutOfRange("tuned acceptance " +
                               std::to_string(st.acceptance) +
                               " outside [0.15, 0.6]");
  if (chain_means.size() > 1) {
    double mall = 0.0;
    for (double v : chain_means) mall += v;
    mall /= chain_means.size();
    double var = 0.0;
    for (double v : chain_means) var += (v - mall) * (v - mall);
    st.between_chain_var = var / (chain_means.size() - 1);
  }
  return st;
}

McmcCorrelations mcmc_correlations(const SpinChainState& state) {
  McmcCorrelations out;
  const int nb = static_cast<int>(state.f_batches.size());
  if (nb < 4 || state.k_list.empty())
    throw Error("mcmc_correlations: state has no pair statistics");

  double fbar = 0.0, gbar = 0.0;
  for (int b = 0; b < nb; ++b) {
    fbar += state.f_batches[b];
    gbar += state.g_batches[b];
  }
  fbar /= nb;
  gbar /= nb;

  // Fit the asymptotic decay rate on k >= 2 with equal weights: the
  // smallest distances carry higher-mode contamination and the smallest
  // relative errors, so an error-weighted fit would chase them.
  std::vector<double> kx, ky, kw;
  for (size_t ki = 0; ki < state.k_list.size(); ++ki) {
    // per-batch plug-in values
    double mean = 0.0;
    std::vector<double> vals(nb);
    for (int b = 0; b < nb; ++b) {
      vals[b] = state.fg_batches[ki][b] -
                state.f_batches[b] * gbar - fbar * state.g_batches[b] +
                fbar * gbar;
      mean += vals[b];
    }
    mean /= nb;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var = var / (nb - 1) / nb;

    CorrelationEstimate ce;
    ce.k = state.k_list[ki];
    ce.value = mean;
    ce.stderr_value = std::sqrt(var);
    out.points.push_back(ce);
    if (ce.k >= 2 && mean > 2.0 * ce.stderr_value) {
      kx.push_back(static_cast<double>(ce.k));
      ky.push_back(std::log(mean));
      kw.push_back(1.0);
    }
  }
  if (kx.size() >= 2) {
    auto fit = num::fit_line(kx, ky, kw);
    out.fitted_rate = -fit.slope;
    out.fitted_rate_stderr = fit.slope_stderr;
  }
  return out;
}

std::vector<double> histogram_density(const SpinChainState& state) {
  std::vector<double> d(state.hist.size(), 0.0);
  double total = static_cast<double>(state.hist_samples);
  if (total <= 0.0) return d;
  for (size_t i = 0; i < d.size(); ++i)
    d[i] = state.hist[i] / (total * state.bin);
  return d;
}

}  // namespace levyspec::mc
