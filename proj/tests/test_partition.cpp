#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "levyspec/partition.hpp"
#include "levyspec/spectrum.hpp"
#include "oracles.hpp"

using namespace levyspec;

namespace {
std::shared_ptr<KernelOperator> example2_op(double L = 40.0, int N = 1001) {
  return std::make_shared<KernelOperator>(
      LevyModel::brownian(1.0), MassFunction::builtin("example2_rational"),
      0.5, Grid(L, N));
}
}  // namespace

TEST_CASE("zn_trace: ratios, free energy, and the n=1 refusal") {
  auto op = example2_op();
  // Z_{n+1}/Z_n approaches mu_1, eventually monotonically
  double mu1 = op->full_spectrum(2).mu[0];
  double ratio = std::exp(log_zn_trace(*op, 33) - log_zn_trace(*op, 32));
  CHECK(ratio == doctest::Approx(mu1).epsilon(1e-8));
  double prev_gap = 1e300;
  for (int n = 8; n <= 20; ++n) {
    double rn = std::exp(log_zn_trace(*op, n + 1) - log_zn_trace(*op, n));
    CHECK(std::abs(rn - mu1) <= prev_gap + 1e-15);
    prev_gap = std::abs(rn - mu1);
  }

  // free energy estimate at n = 64 is within 1e-2 of -log 2
  double fe = -log_zn_trace(*op, 64) / 64.0;
  CHECK(fe == doctest::Approx(-std::log(2.0)).epsilon(0.0).scale(1.0).epsilon(1e-2));

  // n = 1 trace demands an integrable mass
  auto op1 = std::make_shared<KernelOperator>(
      LevyModel::brownian(1.0), MassFunction::builtin("inv_linear"), 0.5,
      Grid(40.0, 801));
  CHECK_THROWS_AS(zn_trace(*op1, 1), NotIntegrable);
  CHECK(zn_trace(*op1, 2) > 0.0);
  // for the integrable mass n = 1 equals the matrix trace
  CHECK(zn_trace(*op, 1) == doctest::Approx(op->trace()).epsilon(1e-10));
}

TEST_CASE("Z2 triple: trace, direct quadrature, Fourier dual") {
  auto model = LevyModel::brownian(1.0);
  auto mass = MassFunction::builtin("example2_rational");
  auto op = example2_op(40.0, 2001);

  double z2t = zn_trace(*op, 2);
  double z2d = z2_direct(model, mass, 0.5, Grid(60.0, 2401));
  double z2f = zhat2_dual(model, mass, 0.5);
  CHECK(z2d == doctest::Approx(z2t).epsilon(5e-3));
  CHECK(z2f == doctest::Approx(z2d).epsilon(5e-3));

  // gaussian mass, r = 1
  auto g1 = MassFunction::builtin("gaussian", 1.0);
  Grid gg(24.0, 961);
  KernelOperator opg(model, g1, 1.0, gg);
  double gt = zn_trace(opg, 2);
  double gd = z2_direct(model, g1, 1.0, gg);
  double gf = zhat2_dual(model, g1, 1.0);
  CHECK(gd == doctest::Approx(gt).epsilon(5e-3));
  CHECK(gf == doctest::Approx(gd).epsilon(5e-3));

  CHECK_THROWS_AS(zhat2_dual(model, MassFunction::builtin("inv_linear"), 0.5),
                  NotIntegrable);
}

TEST_CASE("free-boundary chain") {
  auto op = example2_op();
  auto sol = solve_spectrum(op, 8);
  double E = sol.free_energy();

  // open-chain estimate at n = 64 carries a 1/n transient of size
  // (log beta_1^2)/n; it lands within 1e-2 of E for this example
  double fef = -log_zn_free(*op, 64) / 64.0;
  CHECK(std::abs(fef - E) < 1e-2);
  double predicted_gap = -(std::log(sol.beta(1) * sol.beta(1))) / 64.0 - E / 64.0;
  CHECK(fef - E == doctest::Approx(predicted_gap).epsilon(1e-3));

  // Z_n <= v0 Z^f_n
  for (int n = 2; n <= 16; ++n)
    CHECK(log_zn_trace(*op, n) <=
          std::log(op->v0()) + log_zn_free(*op, n) + 1e-12);

  // n = 2 equals the direct double integral of m v m
  const auto& g = op->grid();
  const auto& m = op->mass_values();
  const auto& vlag = op->vlag();
  double direct = 0.0;
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j)
      direct += g.w(i) * m[i] * vlag[std::abs(i - j)] * m[j] * g.w(j);
  CHECK(zn_free(*op, 2) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("zeta moments") {
  auto op = std::make_shared<KernelOperator>(
      LevyModel::brownian(1.0), MassFunction::builtin("inv_linear"), 0.5,
      Grid(60.0, 1501));
  auto zm = zeta_moments(*op, 0.0, 30);

  // first moment: chain vs direct formula (same integral, two code paths)
  CHECK(zm.moments[0] ==
        doctest::Approx(zm.first_moment_direct).epsilon(1e-10));

  // against the adaptive-quadrature oracle of int e^{-|y|}/(1+|y|) dy
  double ref = 2.0 * oracle::integrate_to_infinity(
                         [](double y) { return std::exp(-y) / (1.0 + y); },
                         1.0, 1e-12);
  CHECK(zm.first_moment_direct == doctest::Approx(ref).epsilon(2e-3));

  // Cauchy-Hadamard: (E[zeta^n]/n!)^{1/n} -> mu_1 within 1% by n = 30
  double mu1 = op->full_spectrum(2).mu[0];
  CHECK(zm.hadamard[29] == doctest::Approx(mu1).epsilon(1e-2));
  // and the approach is monotone over the last stretch
  CHECK(std::abs(zm.hadamard[29] - mu1) < std::abs(zm.hadamard[19] - mu1));
}

TEST_CASE("eigenvalue bounds") {
  auto op = example2_op();
  auto sol = solve_spectrum(op, 4);
  auto b = eigen_bounds(*op, sol.gamma());
  CHECK(b.lower == doctest::Approx(3.0 / 16.0).epsilon(1e-12));
  CHECK(b.lower == doctest::Approx(0.1875));
  CHECK(b.pass);
  CHECK(b.upper >= 0.5);  // i.e. Z2 <= 32/3
  double z2 = z2_direct(op->model(), op->mass(), 0.5, op->grid());
  CHECK(z2 <= 32.0 / 3.0);

  // gaussian mass, Brownian r = 1: all three quantities independent
  auto g1 = MassFunction::builtin("gaussian", 1.0);
  auto opg = std::make_shared<KernelOperator>(LevyModel::brownian(1.0), g1,
                                              1.0, Grid(24.0, 961));
  auto solg = solve_spectrum(opg, 4);
  CHECK(eigen_bounds(*opg, solg.gamma()).pass);

  auto opi = std::make_shared<KernelOperator>(
      LevyModel::brownian(1.0), MassFunction::builtin("inv_linear"), 0.5,
      Grid(40.0, 801));
  CHECK_THROWS_AS(eigen_bounds(*opi, 1.0), NotIntegrable);
}

TEST_CASE("small-r point: Brownian prediction within tolerance") {
  auto model = LevyModel::brownian(1.0);
  auto mass = MassFunction::builtin("example2_rational");
  auto row = small_r_point(model, mass, 1e-2);
  // prediction sqrt(2r)/||m||_1
  CHECK(row.prediction ==
        doctest::Approx(std::sqrt(2.0e-2) * 3.0 / 16.0).epsilon(1e-12));
  // gamma approaches the prediction from above (lower-bound side); at
  // r = 1e-2 the transient is still sizable
  CHECK(row.ratio > 1.0);
  CHECK(row.ratio < 1.5);

  auto study = small_r_study(model, mass, {1e-1, 1e-2});
  CHECK(study.rows.size() == 2);
  CHECK(std::abs(study.rows[1].ratio - 1.0) <
        std::abs(study.rows[0].ratio - 1.0) + 1e-9);
  // fitted log-log slope drifts down toward 1/2 as r shrinks
  CHECK(study.fitted_exponent > 0.5);
  CHECK(study.fitted_exponent < 0.75);
}
