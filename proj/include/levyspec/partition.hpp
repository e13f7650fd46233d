#ifndef LEVYSPEC_PARTITION_HPP
#define LEVYSPEC_PARTITION_HPP

#include <vector>

#include "levyspec/kernel.hpp"

namespace levyspec {

/// log Z_n for the ring system via eigenvalue powers, Sum_j mu_j^n.
/// Stable for n up to hundreds by factoring out mu_1^n. Requires n >= 2;
/// n = 1 additionally requires an L1 mass (the operator trace diverges
/// otherwise).
double log_zn_trace(const KernelOperator& op, int n);
double zn_trace(const KernelOperator& op, int n);

/// Z_2 = \int\int m(x) m(y) v^r(x-y)^2 dx dy by 2D trapezoid on its own
/// grid (independent of the eigenvalue route).
double z2_direct(const LevyModel& model, const MassFunction& mass, double r,
                 const Grid& grid);

/// Fourier-dual route:
///   Z_2 = (1/(2pi)^2) \int |m_hat(u)|^2 rho(u) du,
///   rho(u) = \int dz / ((r - psi(z)) (r - psi(z - u))).
/// Uses only psi and m_hat; no potential density involved.
double zhat2_dual(const LevyModel& model, const MassFunction& mass, double r);

/// Free-boundary log Z^f_n (open chain, n mass factors and n-1
/// interaction links) by repeated kernel-vector products with rescaling.
double log_zn_free(const KernelOperator& op, int n);
double zn_free(const KernelOperator& op, int n);

/// Survival-time moments E[zeta_x^n] = n! * (open chain from x), n up to
/// n_max; moments[0] is the first moment. `first_moment_direct` is the
/// plain quadrature Sum w_i v(x_i - x) m(x_i) on the same grid.
struct ZetaMoments {
  std::vector<double> moments;       // E[zeta^n], n = 1..n_max
  double first_moment_direct = 0.0;
  /// Cauchy-Hadamard diagnostic (E[zeta^n]/n!)^{1/n}; approaches mu_1.
  std::vector<double> hadamard;
};
ZetaMoments zeta_moments(const KernelOperator& op, double x, int n_max);

/// Two-sided bound 1/(||m||_1 v0) <= lambda_1 <= ||m||_1 v0 / Z_2 with
/// Z_2 from the direct quadrature route.
struct EigenBounds {
  double lower = 0.0;
  double upper = 0.0;
  double lambda1 = 0.0;
  bool pass = false;
};
EigenBounds eigen_bounds(const KernelOperator& op, double lambda1);

/// Small-r scaling study: for each r solve the top eigenvalue on an
/// r-adapted grid and compare gamma(r) with the regular-variation
/// prediction. Rows run in parallel.
struct SmallRRow {
  double r = 0.0;
  double gamma = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
  double grid_L = 0.0;
  int grid_N = 0;
};
struct SmallRStudy {
  std::vector<SmallRRow> rows;
  double fitted_exponent = 0.0;  // log-log slope of gamma(r)
};
SmallRStudy small_r_study(const LevyModel& model, const MassFunction& mass,
                          const std::vector<double>& r_list);

/// gamma(r) alone on an r-adapted grid (top eigenvalue via Lanczos).
SmallRRow small_r_point(const LevyModel& model, const MassFunction& mass,
                        double r);

}  // namespace levyspec

#endif
