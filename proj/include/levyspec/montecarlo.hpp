#ifndef LEVYSPEC_MONTECARLO_HPP
#define LEVYSPEC_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "levyspec/mass.hpp"
#include "levyspec/levy_model.hpp"
#include "levyspec/spectrum.hpp"

namespace levyspec::mc {

/// Path-simulation configuration. The Levy path is simulated on a dt
/// mesh; the clock integral uses the trapezoid rule with the final
/// partial step handled exactly in length. T_cap bounds the simulated
/// Levy time; P(e_r > T_cap) = e^{-r T_cap} stays below 1e-8 with the
/// default factor.
struct PathConfig {
  double dt = 1e-2;
  std::uint64_t seed = 1;
  long n_paths = 200000;
  double t_cap_factor = 20.0;  // T_cap = t_cap_factor / r
};

struct ZetaBatch {
  std::vector<double> zeta;  // survival-time samples A_x(e_r)
  std::vector<double> er;    // the exponential lifetimes drawn per path
  long capped = 0;           // paths with e_r > T_cap (zeta truncated)
  double mean = 0.0;
  double stderr_mean = 0.0;
};
ZetaBatch simulate_zeta(const LevyModel& model, const MassFunction& mass,
                        double r, double x, const PathConfig& cfg);

struct SurvivalEstimate {
  std::vector<double> t;
  std::vector<double> prob;
  std::vector<double> lo, hi;  // Wilson 95%
  double gamma_hat = 0.0;
  double gamma_stderr = 0.0;
  long n_paths = 0;
  long capped = 0;
  double zeta_mean = 0.0;
  double zeta_mean_stderr = 0.0;
};
/// Empirical survival curve with a weighted-least-squares decay fit of
/// log P(zeta > t) over [fit_lo, fit_hi]. Throws InsufficientTail when
/// fewer than 200 paths survive the largest fit time. Passing
/// fit_hi <= 0 selects the window from the samples themselves: the top
/// end sits at the 500th-largest survival time.
SurvivalEstimate estimate_survival(const LevyModel& model,
                                   const MassFunction& mass, double r,
                                   double x, const std::vector<double>& t_grid,
                                   const PathConfig& cfg, double fit_lo,
                                   double fit_hi);

/// Ground-state chain at Poisson arrivals: Y_0 ~ ell_1 (grid inverse
/// CDF), then k steps of the row-stochastic kernel. Returns grid node
/// indices, one row of k+1 entries per sample.
std::vector<std::vector<int>> sample_groundstate_chain(
    const GroundStateKernel& kernel, int k, long n_samples,
    std::uint64_t seed);

/// Metropolis acceptance rule shared by the spin sampler and the
/// detailed-balance unit fixture.
double metropolis_accept_prob(double delta_energy);

/// Standard symmetric alpha-stable variate (Chambers-Mallows-Stuck,
/// characteristic function e^{-|y|^alpha}).
double stable_standard_sample(double alpha, std::mt19937_64& rng);

struct McmcConfig {
  long sweeps = 1000000;  // total across chains
  int chains = 4;
  long burn_in = 10000;  // per chain
  std::uint64_t seed = 1;
  double target_acceptance = 0.4;
  double initial_scale = 1.0;
  double hist_halfwidth = 8.0;
  double hist_bin = 0.1;
  std::vector<int> k_list;                 // pair distances to accumulate
  std::function<double(double)> obs_f;     // observables for pair stats
  std::function<double(double)> obs_g;
  int batches_per_chain = 32;
};

struct SpinChainState {
  int ring_n = 0;
  long sweeps_total = 0;
  double acceptance = 0.0;
  double proposal_scale = 0.0;
  // single-site histogram (counts), bins of width `bin` from hist_lo
  std::vector<double> hist;
  double hist_lo = 0.0;
  double bin = 0.0;
  long hist_samples = 0;
  long hist_outside = 0;
  // batch means of site-averaged observables
  std::vector<int> k_list;
  std::vector<std::vector<double>> fg_batches;  // [k][batch]
  std::vector<double> f_batches, g_batches;     // [batch]
  double between_chain_var = 0.0;  // variance of chain means of f
};

/// Single-site random-walk Metropolis for the ring system with
/// V_int = -log v^r and U_mass = -log m. Chains run independently and
/// statistics are pooled in chain order (deterministic under a fixed
/// seed). Throws AcceptanceOutOfRange if the tuned acceptance leaves
/// [0.15, 0.6].
SpinChainState gibbs_mcmc(const LevyModel& model, const MassFunction& mass,
                          double r, int ring_n, const McmcConfig& cfg);

/// Ring Hamiltonian of a configuration under the same potentials.
double spin_energy(const LevyModel& model, const MassFunction& mass, double r,
                   const std::vector<double>& spins);

struct CorrelationEstimate {
  int k = 0;
  double value = 0.0;
  double stderr_value = 0.0;
};
/// Plug-in pair-correlation estimates C_k(f,g) with batch-means errors,
/// plus a weighted exponential-decay fit over the usable k range.
struct McmcCorrelations {
  std::vector<CorrelationEstimate> points;
  double fitted_rate = 0.0;
  double fitted_rate_stderr = 0.0;
};
McmcCorrelations mcmc_correlations(const SpinChainState& state);

/// Normalized histogram density from a chain state.
std::vector<double> histogram_density(const SpinChainState& state);

}  // namespace levyspec::mc

#endif
