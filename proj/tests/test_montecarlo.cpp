#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "levyspec/montecarlo.hpp"
#include "levyspec/observables.hpp"
#include "levyspec/partition.hpp"
#include "oracles.hpp"

using namespace levyspec;

TEST_CASE("constant mass fixture: zeta = c0 e_r exactly") {
  double c0 = 0.7;
  auto flat = MassFunction::custom(
      "flat07", [c0](double) { return c0; }, false, false, c0, 0.0, 0.0, 0.0);
  mc::PathConfig cfg;
  cfg.n_paths = 20000;
  cfg.seed = 11;
  auto batch = mc::simulate_zeta(LevyModel::brownian(1.0), flat, 0.5, 0.0, cfg);
  // pathwise: the clock of a constant mass is exact
  for (size_t i = 0; i < 200; ++i)
    CHECK(batch.zeta[i] == doctest::Approx(c0 * batch.er[i]).epsilon(1e-12));
  // mean -> c0 / r
  CHECK(batch.mean == doctest::Approx(c0 / 0.5).epsilon(3.5 * batch.stderr_mean / batch.mean + 0.02));
}

TEST_CASE("pathwise bound zeta <= e_r ||m||_inf") {
  mc::PathConfig cfg;
  cfg.n_paths = 5000;
  cfg.seed = 3;
  auto mass = MassFunction::builtin("inv_linear");
  auto batch = mc::simulate_zeta(LevyModel::brownian(1.0), mass, 0.5, 0.0, cfg);
  for (size_t i = 0; i < batch.zeta.size(); ++i)
    CHECK(batch.zeta[i] <= batch.er[i] * mass.linf_norm() + 1e-12);
  CHECK(batch.capped == 0);  // P(e_r > 40) ~ 2e-9
}

TEST_CASE("stable increments: empirical characteristic function") {
  std::mt19937_64 rng(12345);
  for (double alpha : {1.2, 1.5, 1.9}) {
    const int n = 60000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = mc::stable_standard_sample(alpha, rng);
    for (double y : {0.4, 1.0, 2.2}) {
      double acc = 0.0;
      for (double x : xs) acc += std::cos(y * x);
      acc /= n;
      double target = std::exp(-std::pow(std::abs(y), alpha));
      CHECK(acc == doctest::Approx(target).scale(1.0).epsilon(4.0 / std::sqrt(n)));
    }
  }
}

TEST_CASE("survival estimate on the exponential example") {
  // Brownian + inv_linear at r = 1/2: gamma = 1, survival ~ (4/3) e^{-t}
  mc::PathConfig cfg;
  cfg.n_paths = 50000;
  cfg.seed = 424242;
  std::vector<double> t_grid;
  for (int i = 0; i <= 24; ++i) t_grid.push_back(0.25 * i);
  auto est = mc::estimate_survival(LevyModel::brownian(1.0),
                                   MassFunction::builtin("inv_linear"), 0.5,
                                   0.0, t_grid, cfg, 2.0, 5.0);
  CHECK(est.prob.front() == 1.0);  // t = 0
  for (size_t i = 1; i < est.prob.size(); ++i)
    CHECK(est.prob[i] <= est.prob[i - 1]);
  // decay rate within 10% at this sample size
  CHECK(est.gamma_hat == doctest::Approx(1.0).epsilon(0.10));
  // survival at t = 4 within the Wilson band of the asymptote
  int i4 = 16;
  double asym = (4.0 / 3.0) * std::exp(-4.0);
  CHECK(est.lo[i4] <= asym * 1.05);
  CHECK(est.hi[i4] >= asym * 0.95);
  // trivial bound, statistically: p(t) <= e^{-r t / ||m||_inf} + 3 se
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double se = 0.5 * (est.hi[i] - est.lo[i]) / 1.96;
    CHECK(est.prob[i] <= std::exp(-0.5 * t_grid[i]) + 3.0 * se + 1e-12);
  }
}

TEST_CASE("seeded determinism and dt bias") {
  mc::PathConfig a;
  a.n_paths = 4000;
  a.seed = 99;
  auto mass = MassFunction::builtin("inv_linear");
  auto model = LevyModel::brownian(1.0);
  auto b1 = mc::simulate_zeta(model, mass, 0.5, 0.0, a);
  auto b2 = mc::simulate_zeta(model, mass, 0.5, 0.0, a);
  CHECK(b1.zeta == b2.zeta);  // bit-identical
  a.seed = 100;
  auto b3 = mc::simulate_zeta(model, mass, 0.5, 0.0, a);
  CHECK(b1.zeta != b3.zeta);

  // halving dt moves the mean by less than two combined stderrs
  mc::PathConfig fine = a;
  fine.seed = 99;
  fine.n_paths = 30000;
  auto coarse = mc::simulate_zeta(model, mass, 0.5, 0.0, fine);
  fine.dt = 0.5e-2;
  auto half = mc::simulate_zeta(model, mass, 0.5, 0.0, fine);
  double tol = 2.0 * std::hypot(coarse.stderr_mean, half.stderr_mean);
  CHECK(std::abs(coarse.mean - half.mean) < tol + 1e-12);

  CHECK_THROWS(mc::simulate_zeta(model, mass, 0.5, 0.0, [] {
    mc::PathConfig bad;
    bad.dt = 0.05;
    return bad;
  }()));
}

TEST_CASE("metropolis rule satisfies detailed balance on a 3-state toy") {
  // target pi on {0,1,2}; proposal: uniform over the other two states
  std::vector<double> pi = {0.2, 0.5, 0.3};
  double P[3][3] = {};
  for (int i = 0; i < 3; ++i) {
    double stay = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      double dh = -std::log(pi[j] / pi[i]);
      double p = 0.5 * mc::metropolis_accept_prob(dh);
      P[i][j] = p;
      stay -= p;
    }
    P[i][i] = stay;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(pi[i] * P[i][j] == doctest::Approx(pi[j] * P[j][i]).epsilon(1e-15));
  // exact stationarity
  for (int j = 0; j < 3; ++j) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += pi[i] * P[i][j];
    CHECK(s == doctest::Approx(pi[j]).epsilon(1e-15));
  }
}

TEST_CASE("spin energy of the flat configuration vanishes for example 1") {
  // V_int(x) = |x| and U_mass(x) = log(1+|x|) both vanish at zero
  std::vector<double> zeros(4, 0.0);
  double h = mc::spin_energy(LevyModel::brownian(1.0),
                             MassFunction::builtin("inv_linear"), 0.5, zeros);
  CHECK(h == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  std::vector<double> cfg = {0.5, -0.25, 0.0, 1.0};
  double expect = 0.0;
  auto u = [](double x) { return std::log(1.0 + std::abs(x)); };
  for (double w : cfg) expect += u(w);
  for (int j = 0; j < 4; ++j)
    expect += std::abs(cfg[(j + 1) % 4] - cfg[j]);
  CHECK(mc::spin_energy(LevyModel::brownian(1.0),
                        MassFunction::builtin("inv_linear"), 0.5, cfg) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("gibbs sampler: two-site ring against direct quadrature") {
  // n = 2 ring: density ~ e^{-2 V(w2-w1)} m(w1) m(w2); check E[bump(w1)]
  auto model = LevyModel::brownian(1.0);
  auto mass = MassFunction::builtin("inv_linear");
  mc::McmcConfig cfg;
  cfg.sweeps = 400000;
  cfg.chains = 4;
  cfg.burn_in = 4000;
  cfg.seed = 7;
  cfg.k_list = {1};
  cfg.obs_f = bump_observable;
  cfg.obs_g = bump_observable;
  auto st = mc::gibbs_mcmc(model, mass, 0.5, 2, cfg);
  CHECK(st.acceptance > 0.15);
  CHECK(st.acceptance < 0.6);

  double fbar = 0.0;
  for (double b : st.f_batches) fbar += b;
  fbar /= st.f_batches.size();

  // direct 2D quadrature of the two-site Gibbs measure
  auto num_f = [&](double w1) {
    auto inner = [&](double w2) {
      return std::exp(-2.0 * std::abs(w2 - w1)) * mass(w2);
    };
    return mass(w1) * bump_observable(w1) *
           oracle::integrate(inner, w1 - 30.0, w1 + 30.0, 1e-10);
  };
  auto num_1 = [&](double w1) {
    auto inner = [&](double w2) {
      return std::exp(-2.0 * std::abs(w2 - w1)) * mass(w2);
    };
    return mass(w1) * oracle::integrate(inner, w1 - 30.0, w1 + 30.0, 1e-10);
  };
  // numerator restricted to the bump support (adaptive rules misjudge
  // compactly supported integrands on wide domains)
  double target = oracle::integrate(num_f, 0.25, 1.75, 1e-10) /
                  oracle::integrate(num_1, -40.0, 40.0, 1e-9);
  double se = std::sqrt(st.between_chain_var / cfg.chains) + 1e-4;
  CHECK(fbar == doctest::Approx(target).scale(1.0).epsilon(0.01 + 4.0 * se));
}

TEST_CASE("ground-state chain marginals and joint law") {
  auto sol = solve_spectrum(LevyModel::brownian(1.0),
                            MassFunction::builtin("inv_linear"), 0.5,
                            Grid(40.0, 801), 8);
  auto gk = groundstate_transition(sol);
  const auto& g = sol.grid();

  const long nsamp = 100000;
  auto samples = mc::sample_groundstate_chain(gk, 10, nsamp, 2024);

  auto l1 = sol.ell1();
  const double lo = -8.0, bw = 0.1;
  const int nb = 160;
  auto bin_of = [&](double x) {
    return static_cast<int>(std::floor((x - lo) / bw));
  };
  std::vector<double> ref(nb, 0.0);
  for (int i = 0; i < g.N; ++i) {
    int b = bin_of(g.x(i));
    if (b >= 0 && b < nb) ref[b] += g.w(i) * l1[i];
  }
  auto marginal_tv = [&](int step) {
    std::vector<double> emp(nb, 0.0);
    for (const auto& s : samples) {
      int b = bin_of(g.x(s[step]));
      if (b >= 0 && b < nb) emp[b] += 1.0 / nsamp;
    }
    double tv = 0.0;
    for (int b = 0; b < nb; ++b) tv += std::abs(emp[b] - ref[b]);
    return 0.5 * tv;
  };
  CHECK(marginal_tv(0) < 0.02);   // inverse-CDF draw from ell_1
  CHECK(marginal_tv(1) < 0.03);   // one kernel step keeps the law
  CHECK(marginal_tv(10) < 0.03);  // stationarity further along

  // drift between the step-5 and step-10 marginals
  std::vector<double> m5(nb, 0.0), m10(nb, 0.0);
  for (const auto& s : samples) {
    int b5 = bin_of(g.x(s[5])), b10 = bin_of(g.x(s[10]));
    if (b5 >= 0 && b5 < nb) m5[b5] += 1.0 / nsamp;
    if (b10 >= 0 && b10 < nb) m10[b10] += 1.0 / nsamp;
  }
  double drift = 0.0;
  for (int b = 0; b < nb; ++b) drift += std::abs(m5[b] - m10[b]);
  CHECK(0.5 * drift < 0.02);

  // joint (Y0, Y1) against the 2-spin Gibbs density on coarse bins
  auto l2 = gibbs_state_density(sol, 2);
  const double jlo = -5.0, jbw = 0.5;
  const int jb = 20;
  std::vector<double> emp(jb * jb, 0.0), ref2(jb * jb, 0.0);
  for (const auto& s : samples) {
    int b0 = static_cast<int>(std::floor((g.x(s[0]) - jlo) / jbw));
    int b1 = static_cast<int>(std::floor((g.x(s[1]) - jlo) / jbw));
    if (b0 >= 0 && b0 < jb && b1 >= 0 && b1 < jb)
      emp[b0 * jb + b1] += 1.0 / nsamp;
  }
  for (int i = 0; i < g.N; ++i) {
    int b0 = static_cast<int>(std::floor((g.x(i) - jlo) / jbw));
    if (b0 < 0 || b0 >= jb) continue;
    for (int j = 0; j < g.N; ++j) {
      int b1 = static_cast<int>(std::floor((g.x(j) - jlo) / jbw));
      if (b1 < 0 || b1 >= jb) continue;
      ref2[b0 * jb + b1] += g.w(i) * g.w(j) * l2.at_nodes({i, j});
    }
  }
  double sa = 0.0, sb = 0.0, tv2 = 0.0;
  for (int b = 0; b < jb * jb; ++b) {
    tv2 += std::abs(emp[b] - ref2[b]);
    sa += emp[b];
    sb += ref2[b];
  }
  tv2 += std::abs(sa - sb);
  CHECK(0.5 * tv2 < 0.05);

  // determinism of the sampler
  auto again = mc::sample_groundstate_chain(gk, 10, 1000, 2024);
  CHECK(again[0] == samples[0]);
}

TEST_CASE("gibbs sampler with a quadrature-backed potential") {
  // stable driver: -log v^r comes from the tabulated quadrature backend
  mc::McmcConfig cfg;
  cfg.sweeps = 30000;
  cfg.chains = 2;
  cfg.burn_in = 1000;
  cfg.seed = 21;
  auto st = mc::gibbs_mcmc(LevyModel::symmetric_stable(1.5, 1.0),
                           MassFunction::builtin("example2_rational"), 1.0, 8,
                           cfg);
  CHECK(st.acceptance > 0.15);
  CHECK(st.acceptance < 0.6);
  CHECK(st.hist_samples == 8 * (cfg.sweeps / cfg.chains) * cfg.chains);
}

TEST_CASE("acceptance window is enforced") {
  // a frozen oversized proposal scale drives acceptance toward zero
  mc::McmcConfig cfg;
  cfg.sweeps = 4000;
  cfg.chains = 1;
  cfg.burn_in = 0;  // no tuning
  cfg.seed = 1;
  cfg.initial_scale = 400.0;
  CHECK_THROWS_AS(mc::gibbs_mcmc(LevyModel::brownian(1.0),
                                 MassFunction::builtin("inv_linear"), 0.5, 8,
                                 cfg),
                  AcceptanceOutOfRange);
}

TEST_CASE("gibbs sampler determinism") {
  mc::McmcConfig cfg;
  cfg.sweeps = 20000;
  cfg.chains = 2;
  cfg.burn_in = 500;
  cfg.seed = 5;
  auto run = [&] {
    return mc::gibbs_mcmc(LevyModel::brownian(1.0),
                          MassFunction::builtin("inv_linear"), 0.5, 16, cfg);
  };
  auto a = run();
  auto b = run();
  CHECK(a.hist == b.hist);
  CHECK(a.acceptance == b.acceptance);
}
