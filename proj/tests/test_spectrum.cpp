#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "levyspec/observables.hpp"
#include "levyspec/spectrum.hpp"
#include "oracles.hpp"

using namespace levyspec;

namespace {

// m(x) = 1/(1+|x|), Brownian, r = 1/2: ground state
// sqrt(2/3)(1+|x|)e^{-|x|} with unit rate.
SpectralSolution example1(double L = 60.0, int N = 1501, int k = 40) {
  return solve_spectrum(LevyModel::brownian(1.0),
                        MassFunction::builtin("inv_linear"), 0.5, Grid(L, N),
                        k);
}

double ex1_q1(double x) {
  return std::sqrt(2.0 / 3.0) * (1.0 + std::abs(x)) * std::exp(-std::abs(x));
}

}  // namespace

TEST_CASE("example 1: ground state and derived scalars") {
  auto sol = example1();
  CHECK(sol.gamma() == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(sol.free_energy() == doctest::Approx(0.0).scale(1.0).epsilon(2e-3));

  const auto& g = sol.grid();
  // pointwise ground state against the closed form at the nodes
  for (double x : {0.0, 0.48, 1.04, 2.0, 4.0, 7.04, 9.6}) {
    int i = g.index_of(x);
    CHECK(sol.q(1)[i] == doctest::Approx(ex1_q1(g.x(i))).epsilon(8e-3));
  }
  CHECK(sol.q(1)[g.index_of(0.0)] ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(5e-3));

  CHECK(sol.K(0.0) == doctest::Approx(4.0 / 3.0).epsilon(5e-3));
  CHECK(sol.K(1.04) ==
        doctest::Approx((4.0 / 3.0) * 2.04 * std::exp(-1.04)).epsilon(8e-3));

  auto l1 = sol.ell1();
  CHECK(l1[g.index_of(0.0)] == doctest::Approx(2.0 / 3.0).epsilon(5e-3));
  CHECK(l1[g.index_of(1.04)] ==
        doctest::Approx((2.0 / 3.0) * 2.04 * std::exp(-2.08)).epsilon(8e-3));

  // ell_1 integrates to one (probability density)
  double mass = 0.0;
  for (int i = 0; i < g.N; ++i) mass += g.w(i) * l1[i];
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  // positivity after the sign fix, on the resolved support
  auto [slo, shi] = sol.q1_support();
  double qmin = 1e300, qmax = 0.0;
  for (int i = slo; i <= shi; ++i) qmin = std::min(qmin, sol.q(1)[i]);
  for (double v : sol.q(1)) qmax = std::max(qmax, v);
  CHECK(qmin > 0.0);
  CHECK(g.x(slo) < -20.0);  // support reaches far out
  CHECK(g.x(shi) > 20.0);
  for (double v : sol.q(1)) CHECK(v > -1e-10 * qmax);
}

TEST_CASE("example 2: decay rate and free energy") {
  auto sol = solve_spectrum(LevyModel::brownian(1.0),
                            MassFunction::builtin("example2_rational"), 0.5,
                            Grid(40.0, 1001), 16);
  CHECK(sol.gamma() == doctest::Approx(0.5).epsilon(4e-3));
  CHECK(sol.free_energy() == doctest::Approx(-std::log(2.0)).epsilon(6e-3));
  CHECK(sol.free_energy() == doctest::Approx(-0.69315).epsilon(1e-2));
  // strict gap
  CHECK(sol.lambda(2) > sol.gamma());
}

TEST_CASE("orthonormality and the gap identity") {
  auto sol = example1(40.0, 801, 12);
  const auto& g = sol.grid();
  const auto& m = sol.op().mass_values();
  for (int a = 1; a <= 12; ++a)
    for (int b = a; b <= 12; ++b) {
      double gram = 0.0;
      for (int i = 0; i < g.N; ++i)
        gram += g.w(i) * m[i] * sol.q(a)[i] * sol.q(b)[i];
      CHECK(gram == doctest::Approx(a == b ? 1.0 : 0.0)
                        .scale(1.0)
                        .epsilon(1e-8));
    }
  double lhs = sol.spectral_gap();
  double rhs =
      std::exp(sol.free_energy()) * (std::exp(sol.correlation_rate()) - 1.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("survival series and asymptote") {
  auto sol = example1();
  // t = 4: dominated by the ground mode; odd modes vanish at x = 0
  auto sv = survival_probability(sol, 0.0, 4.0, 40);
  CHECK(sv.probability ==
        doctest::Approx((4.0 / 3.0) * std::exp(-4.0)).epsilon(8e-3));
  CHECK(sv.truncation_bound < 1e-20);

  // asymptote pair and the Gibbs-form equivalence
  auto asym = survival_asymptote(sol, 0.0);
  CHECK(asym.gamma == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(asym.K == doctest::Approx(4.0 / 3.0).epsilon(5e-3));
  CHECK(asym.K == doctest::Approx(asym.K_gibbs_form).epsilon(1e-10));
  auto asym1 = survival_asymptote(sol, 1.04);
  CHECK(asym1.K ==
        doctest::Approx((4.0 / 3.0) * 2.04 * std::exp(-1.04)).epsilon(8e-3));

  // small t: the truncated series sits near 1 (partial sums oscillate
  // around it) and the reported truncation bound covers the gap
  double p40 = survival_probability(sol, 0.0, 1e-3, 40).probability;
  CHECK(p40 > 0.95);
  CHECK(p40 <= 1.0);
  CHECK(1.0 - p40 < survival_probability(sol, 0.0, 1e-3, 40).truncation_bound);

  CHECK_THROWS_AS(survival_probability(sol, 100.0, 1.0, 10), OutOfGrid);
}

TEST_CASE("gibbs state densities") {
  auto sol = example1(40.0, 801, 8);
  const auto& g = sol.grid();
  auto l1 = gibbs_state_density(sol, 1).single_site();
  CHECK(l1[g.index_of(0.0)] == doctest::Approx(2.0 / 3.0).epsilon(5e-3));
  CHECK(l1[g.index_of(1.0)] ==
        doctest::Approx((2.0 / 3.0) * 2.0 * std::exp(-2.0)).epsilon(8e-3));
  CHECK(l1[g.index_of(1.0)] == doctest::Approx(0.18045).epsilon(8e-3));

  // k = 2 density integrates to 1 on the grid
  auto l2 = gibbs_state_density(sol, 2);
  double total = 0.0;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j)
      total += g.w(i) * g.w(j) * l2.at_nodes({i, j});
  CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("transfer-operator correlations") {
  auto sol = example1(40.0, 801, 120);
  const auto& g = sol.grid();
  std::vector<double> ones(g.N, 1.0);

  // f = g = 1: orthogonality kills every mode
  for (int k : {1, 2, 5, 20})
    CHECK(std::abs(correlation(sol, ones, ones, k).value) < 1e-10);

  auto f = tabulate(g, bump_observable);
  // decay rate over k in [10, 25] matches C = log(lambda_2/lambda_1)
  double c_ref = sol.correlation_rate();
  std::vector<double> ks, logs;
  for (int k = 10; k <= 25; ++k) {
    double v = correlation(sol, f, f, k).value;
    REQUIRE(v > 0.0);
    ks.push_back(k);
    logs.push_back(std::log(v));
  }
  double slope = (logs.back() - logs.front()) / (ks.back() - ks.front());
  CHECK(-slope == doctest::Approx(c_ref).epsilon(1e-3));

  // prefactor: e^{kC} C_k approaches B with < 1% drift by k = 20
  auto b = correlation(sol, f, f, 20).prefactor_B;
  double r20 = std::exp(20.0 * c_ref) * correlation(sol, f, f, 20).value;
  double r21 = std::exp(21.0 * c_ref) * correlation(sol, f, f, 21).value;
  CHECK(r20 == doctest::Approx(b).epsilon(2e-2));
  CHECK(std::abs(r21 / r20 - 1.0) < 1e-2);

  // independent oracle at k = 3: direct chain quadrature of the
  // (k+1)-spin Gibbs density minus the product of single-site means
  {
    const auto& m = sol.op().mass_values();
    const auto& vlag = sol.op().vlag();
    const auto& q1 = sol.q(1);
    double lam1 = sol.gamma();
    int N = g.N;
    // start: a_i = w_i m_i q1_i f_i ; three v-m chain steps; close with
    // w_j m_j q1_j f_j
    std::vector<double> cur(N), nxt(N);
    for (int i = 0; i < N; ++i) cur[i] = g.w(i) * m[i] * q1[i] * f[i];
    for (int step = 0; step < 3; ++step) {
      for (int j = 0; j < N; ++j) {
        double acc = 0.0;
        for (int i = 0; i < N; ++i) acc += cur[i] * vlag[std::abs(j - i)];
        nxt[j] = acc * g.w(j) * m[j];
      }
      std::swap(cur, nxt);
    }
    double joint = 0.0;
    for (int j = 0; j < N; ++j) joint += cur[j] * q1[j] * f[j] / g.w(j) * g.w(j);
    joint *= lam1 * lam1 * lam1;
    double mean_f = 0.0;
    auto l1 = sol.ell1();
    for (int i = 0; i < N; ++i) mean_f += g.w(i) * l1[i] * f[i];
    double oracle_c3 = joint - mean_f * mean_f;
    double series_c3 = correlation(sol, f, f, 3).value;
    CHECK(series_c3 == doctest::Approx(oracle_c3).epsilon(1e-5));
  }
}

TEST_CASE("ground-state transition kernel") {
  auto sol = example1(40.0, 801, 8);
  auto gk = groundstate_transition(sol);
  CHECK(gk.max_row_drift < 1e-3);

  const auto& g = sol.grid();
  // raw row sums (pre-normalization) near one at a few rows
  const auto& m = sol.op().mass_values();
  const auto& vlag = sol.op().vlag();
  for (int i : {gk.support_lo, 200, 400, gk.support_hi}) {
    double s = 0.0;
    for (int j = 0; j < g.N; ++j)
      s += gk.lambda1 * vlag[std::abs(j - i)] * m[j] * gk.q1[j] * g.w(j) /
           gk.q1[i];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-3));
  }

  // pi is an exact fixed left vector of the renormalized kernel
  auto pi = gk.stationary();
  std::vector<double> piT(g.N, 0.0);
  for (int i = gk.support_lo; i <= gk.support_hi; ++i) {
    auto row = gk.row(i);
    for (int j = 0; j < g.N; ++j) piT[j] += pi[i] * row[j];
  }
  double tv = 0.0;
  for (int j = 0; j < g.N; ++j) tv += std::abs(piT[j] - pi[j]);
  CHECK(0.5 * tv < 1e-10);

  // two-step joint from the ell_1 start equals the 2-spin Gibbs density
  auto l2 = gibbs_state_density(sol, 2);
  for (int i : {350, 400, 450}) {
    auto row = gk.row(i);
    for (int j : {380, 400, 430}) {
      double lhs = pi[i] * row[j];
      double rhs = g.w(i) * g.w(j) * l2.at_nodes({i, j});
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
}

TEST_CASE("resolution stability of the leading eigenvalue") {
  // coarse versus refined: the drift shrinks with the base resolution
  auto coarse = example1(40.0, 801, 2);
  auto fine = example1(50.0, 1601, 2);
  CHECK(std::abs(coarse.gamma() - fine.gamma()) / fine.gamma() < 2e-3);
}
