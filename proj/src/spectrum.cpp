#include "levyspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "levyspec/errors.hpp"

namespace levyspec {

const std::vector<double>& SpectralSolution::mu_all() const {
  return op_->full_spectrum(k_).mu;
}

double SpectralSolution::free_energy() const { return std::log(lambda_[0]); }

double SpectralSolution::spectral_gap() const {
  return lambda_[1] - lambda_[0];
}

double SpectralSolution::correlation_rate() const {
  return std::log(lambda_[1] / lambda_[0]);
}

double SpectralSolution::K(double x) const {
  int i = grid().index_of(x);
  return beta_[0] * q_[0][i];
}

std::vector<double> SpectralSolution::K_values() const {
  std::vector<double> out(grid().N);
  for (int i = 0; i < grid().N; ++i) out[i] = beta_[0] * q_[0][i];
  return out;
}

std::vector<double> SpectralSolution::ell1() const {
  const auto& m = op_->mass_values();
  std::vector<double> out(grid().N);
  for (int i = 0; i < grid().N; ++i) out[i] = m[i] * q_[0][i] * q_[0][i];
  return out;
}

SpectralSolution solve_spectrum(std::shared_ptr<const KernelOperator> op,
                                int k) {
  const auto& fs = op->full_spectrum(k);
  const int N = op->grid().N;
  if (fs.mu.size() < 2 || fs.mu[0] - fs.mu[1] < 1e-12)
    throw DegenerateGap(
        "top Nystrom eigenvalues nearly coincide; the ground state must be "
        "simple, refine the grid");
  if (!(fs.mu[k - 1] > 0.0))
    throw ConvergenceFailure("retained eigenvalue " + std::to_string(k) +
                             " is not positive; reduce spectrum.k");

  SpectralSolution sol;
  sol.op_ = op;
  sol.k_ = k;
  sol.lambda_.resize(k);
  sol.q_.resize(k);
  sol.beta_.resize(k);
  sol.residual_beta_sq_ = fs.residual_beta_sq;

  const auto& u = op->u();
  for (int n = 0; n < k; ++n) {
    sol.lambda_[n] = 1.0 / fs.mu[n];
    std::vector<double> q(N);
    const auto& phi = fs.vectors[n];
    for (int i = 0; i < N; ++i) q[i] = phi[i] / u[i];
    // Sign convention: q_1 positive; higher modes keyed to their largest
    // |entry| so repeated runs agree.
    double flip = 1.0;
    if (n == 0) {
      double s = 0.0;
      for (int i = 0; i < N; ++i) s += phi[i];
      flip = s < 0.0 ? -1.0 : 1.0;
    } else {
      int arg = 0;
      for (int i = 1; i < N; ++i)
        if (std::abs(phi[i]) > std::abs(phi[arg])) arg = i;
      flip = phi[arg] < 0.0 ? -1.0 : 1.0;
    }
    if (flip < 0.0)
      for (double& t : q) t = -t;
    sol.q_[n] = std::move(q);
    sol.beta_[n] = flip * fs.betas[n];
  }
  return sol;
}

std::pair<int, int> SpectralSolution::q1_support() const {
  // Range where q_1 is resolved above the eigensolver noise floor;
  // outside it the entries are pure rounding noise (the true values
  // decay below 1e-13 of the peak).
  const auto& q1 = q_[0];
  double qmax = 0.0;
  for (double t : q1) qmax = std::max(qmax, t);
  double floor = 1e-12 * qmax;
  int lo = 0, hi = grid().N - 1;
  while (lo < hi && !(q1[lo] > floor)) ++lo;
  while (hi > lo && !(q1[hi] > floor)) --hi;
  return {lo, hi};
}

SpectralSolution solve_spectrum(const LevyModel& model,
                                const MassFunction& mass, double r,
                                const Grid& grid, int k) {
  auto op = std::make_shared<KernelOperator>(model, mass, r, grid);
  return solve_spectrum(op, k);
}

SurvivalValue survival_probability(const SpectralSolution& sol, double x,
                                   double t, int n_terms) {
  if (!(t >= 0.0)) throw Error("survival_probability: t must be >= 0");
  n_terms = std::min(n_terms, sol.retained());
  int i = sol.grid().index_of(x);
  double p = 0.0;
  for (int n = 1; n <= n_terms; ++n)
    p += std::exp(-t * sol.lambda(n)) * sol.beta(n) * sol.q(n)[i];

  SurvivalValue out;
  out.probability = std::clamp(p, 0.0, 1.0);
  // Magnitude of the first dropped mode: |beta_{k+1}| |q_{k+1}|_inf is
  // bounded by sqrt(residual beta mass) * sqrt(v0 / mu_{k+1}).
  const auto& mu = sol.mu_all();
  if (n_terms < static_cast<int>(mu.size()) && mu[n_terms] > 0.0) {
    double lam_next = 1.0 / mu[n_terms];
    out.truncation_bound = std::exp(-t * lam_next) *
                           std::sqrt(sol.residual_beta_sq()) *
                           std::sqrt(sol.op().v0() / mu[n_terms]);
  }
  return out;
}

SurvivalAsymptote survival_asymptote(const SpectralSolution& sol, double x) {
  SurvivalAsymptote out;
  out.gamma = sol.gamma();
  int ix = sol.grid().index_of(x);
  out.K = sol.beta(1) * sol.q(1)[ix];

  // sqrt(ell_1/m)(x) * \int sqrt(m ell_1): same quantity through the
  // Gibbs-state formulas.
  const auto& m = sol.op().mass_values();
  const auto& g = sol.grid();
  auto l1 = sol.ell1();
  double integral = 0.0;
  for (int i = 0; i < g.N; ++i)
    integral += g.w(i) * std::sqrt(m[i] * l1[i]);
  out.K_gibbs_form = std::sqrt(l1[ix] / m[ix]) * integral;
  return out;
}

GibbsDensity::GibbsDensity(const SpectralSolution& sol, int k)
    : op_(sol.shared_op()), q1_(sol.q(1)), k_(k), lam1_(sol.gamma()) {
  if (k < 1) throw Error("gibbs_state_density: k must be >= 1");
}

double GibbsDensity::at_nodes(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != k_)
    throw Error("gibbs density: tuple arity mismatch");
  const auto& m = op_->mass_values();
  const auto& vlag = op_->vlag();
  double val = std::pow(lam1_, k_ - 1) * m[idx[0]] * std::abs(q1_[idx[0]]);
  for (int j = 1; j < k_; ++j) {
    val *= vlag[std::abs(idx[j] - idx[j - 1])] * m[idx[j]];
  }
  val *= std::abs(q1_[idx[k_ - 1]]);
  return val;
}

std::vector<double> GibbsDensity::single_site() const {
  const auto& m = op_->mass_values();
  std::vector<double> out(op_->grid().N);
  for (int i = 0; i < op_->grid().N; ++i) out[i] = m[i] * q1_[i] * q1_[i];
  return out;
}

GibbsDensity gibbs_state_density(const SpectralSolution& sol, int k) {
  return GibbsDensity(sol, k);
}

CorrelationValue correlation(const SpectralSolution& sol,
                             const std::vector<double>& f,
                             const std::vector<double>& g, int k) {
  const auto& grid = sol.grid();
  if (static_cast<int>(f.size()) != grid.N ||
      static_cast<int>(g.size()) != grid.N)
    throw Error("correlation: observables must be tabulated on the grid");
  const auto& m = sol.op().mass_values();
  const auto& q1 = sol.q(1);

  CorrelationValue out;
  double lam1 = sol.gamma();
  double lam2 = sol.lambda(2);
  for (int n = 2; n <= sol.retained(); ++n) {
    double af = 0.0, ag = 0.0;
    const auto& qn = sol.q(n);
    for (int i = 0; i < grid.N; ++i) {
      double wmq = grid.w(i) * m[i] * q1[i] * qn[i];
      af += wmq * f[i];
      ag += wmq * g[i];
    }
    out.value += std::pow(lam1 / sol.lambda(n), k) * af * ag;
    // prefactor collects the (possibly multiple) modes at lambda_2
    if (sol.lambda(n) <= lam2 + 1e-8) out.prefactor_B += af * ag;
  }
  return out;
}

GroundStateKernel groundstate_transition(const SpectralSolution& sol) {
  GroundStateKernel gk;
  gk.op = sol.shared_op();
  gk.q1 = sol.q(1);
  gk.lambda1 = sol.gamma();
  auto [lo, hi] = sol.q1_support();
  gk.support_lo = lo;
  gk.support_hi = hi;

  double qmax = 0.0;
  for (double v : gk.q1) qmax = std::max(qmax, v);
  for (int i = lo; i <= hi; ++i)
    if (!(gk.q1[i] > 0.0))
      throw ConditionViolated("ground state not positive on its support");
  for (double v : gk.q1)
    if (v < -1e-10 * qmax)
      throw ConditionViolated("ground state has a resolved negative lobe");

  const auto& grid = sol.op().grid();
  const auto& m = sol.op().mass_values();
  const auto& vlag = sol.op().vlag();
  double worst = 0.0;
  int stride = std::max(1, (hi - lo) / 257);
  for (int i = lo; i <= hi; i += stride) {
    double s = 0.0;
    for (int j = 0; j < grid.N; ++j)
      s += gk.lambda1 * vlag[std::abs(j - i)] * m[j] * gk.q1[j] * grid.w(j) /
           gk.q1[i];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  gk.max_row_drift = worst;
  if (worst > 1e-2)
    throw RowMassError("ground-state kernel row sums drift by " +
                       std::to_string(worst));
  return gk;
}

std::vector<double> GroundStateKernel::row(int i) const {
  if (i < support_lo || i > support_hi)
    throw OutOfGrid("ground-state kernel row outside the resolved support");
  const auto& grid = op->grid();
  const auto& m = op->mass_values();
  const auto& vlag = op->vlag();
  std::vector<double> r(grid.N);
  double s = 0.0;
  for (int j = 0; j < grid.N; ++j) {
    double p = lambda1 * vlag[std::abs(j - i)] * m[j] * q1[j] * grid.w(j) /
               q1[i];
    r[j] = p > 0.0 ? p : 0.0;  // sub-noise q1 entries round to zero mass
    s += r[j];
  }
  for (double& t : r) t /= s;
  return r;
}

std::vector<double> GroundStateKernel::stationary() const {
  const auto& grid = op->grid();
  const auto& m = op->mass_values();
  std::vector<double> pi(grid.N, 0.0);
  double s = 0.0;
  for (int i = support_lo; i <= support_hi; ++i) {
    pi[i] = grid.w(i) * m[i] * q1[i] * q1[i];
    s += pi[i];
  }
  for (double& t : pi) t /= s;
  return pi;
}

}  // namespace levyspec
