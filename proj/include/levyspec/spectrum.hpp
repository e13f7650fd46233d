#ifndef LEVYSPEC_SPECTRUM_HPP
#define LEVYSPEC_SPECTRUM_HPP

#include <memory>
#include <utility>
#include <vector>

#include "levyspec/kernel.hpp"

namespace levyspec {

/// Spectral data of the time-changed killed process on a grid.
///
/// Eigenvalues lambda_n = 1/mu_n of the generator come from the Nystrom
/// eigenvalues mu_n of the symmetric kernel; eigenfunctions q_n are
/// L2(m)-orthonormal on the grid. Derived scalars: decay rate gamma,
/// free energy E = log gamma, survival prefactor K, single-site Gibbs
/// density ell_1, spectral gap c and correlation rate C.
class SpectralSolution {
 public:
  const Grid& grid() const { return op_->grid(); }
  const KernelOperator& op() const { return *op_; }
  std::shared_ptr<const KernelOperator> shared_op() const { return op_; }
  int retained() const { return k_; }

  const std::vector<double>& mu_all() const;      // descending
  const std::vector<double>& lambdas() const { return lambda_; }
  double lambda(int n) const { return lambda_.at(n - 1); }  // 1-based
  /// q_n tabulated on the grid (n is 1-based).
  const std::vector<double>& q(int n) const { return q_.at(n - 1); }
  double beta(int n) const { return beta_.at(n - 1); }  // <m, q_n>_{L2}

  double gamma() const { return lambda_[0]; }
  double free_energy() const;               // E = log lambda_1
  double spectral_gap() const;              // c = lambda_2 - lambda_1
  double correlation_rate() const;          // C = log(lambda_2/lambda_1)
  double K(double x) const;                 // <m,q_1> q_1(x)
  std::vector<double> K_values() const;
  std::vector<double> ell1() const;         // m q_1^2 on the grid
  double residual_beta_sq() const { return residual_beta_sq_; }
  /// Node range on which q_1 is resolved above the eigensolver noise
  /// floor; entries outside are rounding noise around true values
  /// below ~1e-13 of the peak.
  std::pair<int, int> q1_support() const;

  friend SpectralSolution solve_spectrum(
      std::shared_ptr<const KernelOperator> op, int k);

 private:
  std::shared_ptr<const KernelOperator> op_;
  int k_ = 0;
  std::vector<double> lambda_;
  std::vector<std::vector<double>> q_;
  std::vector<double> beta_;
  double residual_beta_sq_ = 0.0;
};

SpectralSolution solve_spectrum(std::shared_ptr<const KernelOperator> op,
                                int k);
SpectralSolution solve_spectrum(const LevyModel& model,
                                const MassFunction& mass, double r,
                                const Grid& grid, int k);

/// Survival series  P(zeta_x > t) = Sum_n e^{-t lambda_n} <m,q_n> q_n(x)
/// truncated at n_terms, clamped to [0,1], with a truncation estimate.
struct SurvivalValue {
  double probability = 0.0;
  double truncation_bound = 0.0;
};
SurvivalValue survival_probability(const SpectralSolution& sol, double x,
                                   double t, int n_terms);

/// Leading asymptote P(zeta_x > t) ~ K(x) e^{-gamma t}; also returns the
/// Gibbs-side expression sqrt(ell_1/m) * \int sqrt(m ell_1) and their
/// discrepancy (an internal consistency diagnostic).
struct SurvivalAsymptote {
  double gamma = 0.0;
  double K = 0.0;
  double K_gibbs_form = 0.0;
};
SurvivalAsymptote survival_asymptote(const SpectralSolution& sol, double x);

/// Factorized infinite-volume Gibbs k-spin density
///   ell_k(y_1..y_k) = lambda_1^{k-1} m q_1(y_1) v(y_2-y_1) ... q_1(y_k).
/// Evaluation at a grid tuple costs O(k).
class GibbsDensity {
 public:
  GibbsDensity(const SpectralSolution& sol, int k);
  int order() const { return k_; }
  /// Density at a tuple of grid node indices.
  double at_nodes(const std::vector<int>& idx) const;
  /// k = 1 specialization on the grid.
  std::vector<double> single_site() const;
  const Grid& grid() const { return op_->grid(); }

 private:
  std::shared_ptr<const KernelOperator> op_;
  std::vector<double> q1_;
  int k_;
  double lam1_;
};
GibbsDensity gibbs_state_density(const SpectralSolution& sol, int k);

/// Transfer-operator correlation of grid observables f, g at distance k:
///   C_k(f,g) = Sum_{n>=2} (lambda_1/lambda_n)^k a_n(f) a_n(g),
/// a_n(h) = <q_1 h, q_n>_{L2(m)}. Also returns the lambda_2-eigenspace
/// prefactor B(f,g).
struct CorrelationValue {
  double value = 0.0;
  double prefactor_B = 0.0;
};
CorrelationValue correlation(const SpectralSolution& sol,
                             const std::vector<double>& f,
                             const std::vector<double>& g, int k);

/// Row-stochastic transition matrix of the ground-state chain,
///   T_ij ~ lambda_1 v(x_j - x_i) m_j q_1(x_j) w_j / q_1(x_i),
/// rows renormalized; reports the worst raw row-sum drift.
struct GroundStateKernel {
  std::shared_ptr<const KernelOperator> op;
  std::vector<double> q1;
  double lambda1 = 0.0;
  double max_row_drift = 0.0;
  // numerically resolved support of q_1; the chain lives here (the
  // stationary mass outside is below 1e-24)
  int support_lo = 0;
  int support_hi = 0;

  int size() const { return op->grid().N; }
  /// Renormalized row i (probabilities over grid nodes); i must lie in
  /// the support.
  std::vector<double> row(int i) const;
  /// Stationary weights pi_i = w_i m_i q_1(x_i)^2 (sums to 1).
  std::vector<double> stationary() const;
};
GroundStateKernel groundstate_transition(const SpectralSolution& sol);

}  // namespace levyspec

#endif
