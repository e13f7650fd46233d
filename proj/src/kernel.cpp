#include "levyspec/kernel.hpp"

#include <cmath>
#include <thread>

#include "levyspec/eigensolve.hpp"
#include "levyspec/errors.hpp"

namespace levyspec {

namespace {
void parallel_range(int n, const std::function<void(int, int)>& body) {
  unsigned hw = std::thread::hardware_concurrency();
  int workers = static_cast<int>(hw == 0 ? 1 : hw);
  if (workers <= 1 || n < 256) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& t : pool) t.join();
}
}  // namespace

KernelOperator::KernelOperator(const LevyModel& model, const MassFunction& mass,
                               double r, const Grid& grid,
                               PotentialOptions popts)
    : model_(model), mass_(mass), r_(r), grid_(grid) {
  potential_ = std::make_shared<PotentialDensity>(model, r, popts);
  const int N = grid_.N;
  u_.resize(N);
  mvals_.resize(N);
  for (int i = 0; i < N; ++i) {
    double m = mass_(grid_.x(i));
    if (!(m > 0.0))
      throw ConditionViolated("mass is not positive at x=" +
                              std::to_string(grid_.x(i)));
    mvals_[i] = m;
    u_[i] = std::sqrt(grid_.w(i) * m);
  }
  vlag_.resize(N);
  const PotentialDensity& pd = *potential_;
  parallel_range(N, [&](int lo, int hi) {
    for (int k = lo; k < hi; ++k) vlag_[k] = pd.value(k * grid_.h);
  });
}

double KernelOperator::entry(int i, int j) const {
  double v = u_[i] * u_[j] * vlag_[std::abs(i - j)];
  if ((i == tamper_i_ && j == tamper_j_) || (i == tamper_j_ && j == tamper_i_))
    v = -v;
  return v;
}

void KernelOperator::matvec(const double* x, double* y) const {
  const int N = grid_.N;
  std::vector<double> t(N);
  for (int j = 0; j < N; ++j) t[j] = u_[j] * x[j];
  parallel_range(N, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      double acc = 0.0;
      const double* v = vlag_.data();
      for (int j = 0; j < i; ++j) acc += v[i - j] * t[j];
      for (int j = i; j < N; ++j) acc += v[j - i] * t[j];
      y[i] = u_[i] * acc;
    }
  });
  if (tamper_i_ >= 0) {
    double base = u_[tamper_i_] * u_[tamper_j_] *
                  vlag_[std::abs(tamper_i_ - tamper_j_)];
    y[tamper_i_] += -2.0 * base * x[tamper_j_];
    if (tamper_i_ != tamper_j_) y[tamper_j_] += -2.0 * base * x[tamper_i_];
  }
}

std::vector<double> KernelOperator::dense() const {
  const int N = grid_.N;
  std::vector<double> M(static_cast<size_t>(N) * N);
  parallel_range(N, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i)
      for (int j = 0; j < N; ++j) M[static_cast<size_t>(i) * N + j] = entry(i, j);
  });
  // entry() is symmetric by construction; keep the (S + S^T)/2 contract
  // cheap by averaging in place.
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      size_t a = static_cast<size_t>(i) * N + j;
      size_t b = static_cast<size_t>(j) * N + i;
      double s = 0.5 * (M[a] + M[b]);
      M[a] = M[b] = s;
    }
  return M;
}

double KernelOperator::trace() const {
  double t = 0.0;
  for (int i = 0; i < grid_.N; ++i) t += entry(i, i);
  return t;
}

double KernelOperator::frobenius_sq() const {
  const int N = grid_.N;
  double total = 0.0;
  // Toeplitz structure: sum_ij u_i^2 u_j^2 v_{|i-j|}^2
  std::vector<double> u2(N);
  for (int i = 0; i < N; ++i) u2[i] = u_[i] * u_[i];
  for (int lag = 0; lag < N; ++lag) {
    double s = 0.0;
    for (int i = 0; i + lag < N; ++i) s += u2[i] * u2[i + lag];
    total += (lag == 0 ? 1.0 : 2.0) * s * vlag_[lag] * vlag_[lag];
  }
  // A tampered (sign-flipped) entry leaves Sum S_ij^2 unchanged.
  return total;
}

double KernelOperator::mass_quadrature() const {
  double s = 0.0;
  for (int i = 0; i < grid_.N; ++i) s += grid_.w(i) * mvals_[i];
  return s;
}

void KernelOperator::tamper_entry(int i, int j) {
  if (i < 0 || j < 0 || i >= grid_.N || j >= grid_.N)
    throw Error("tamper_entry: index out of range");
  tamper_i_ = i;
  tamper_j_ = j;
  std::lock_guard<std::mutex> lock(spectrum_mutex_);
  spectrum_.reset();
}

const KernelOperator::FullSpectrum& KernelOperator::full_spectrum(
    int k_vectors) const {
  std::lock_guard<std::mutex> lock(spectrum_mutex_);
  if (spectrum_ && spectrum_->k >= k_vectors) return *spectrum_;

  const int N = grid_.N;
  int k = std::min(k_vectors, N);
  auto es = eig::dense_symmetric(dense(), N, k);
  auto out = std::make_unique<FullSpectrum>();
  out->mu = std::move(es.values);
  out->vectors = std::move(es.vectors);
  out->k = k;
  out->betas.resize(k);
  double used = 0.0;
  for (int j = 0; j < k; ++j) {
    double b = 0.0;
    for (int i = 0; i < N; ++i) b += u_[i] * out->vectors[j][i];
    out->betas[j] = b;
    used += b * b;
  }
  out->residual_beta_sq = std::max(0.0, mass_quadrature() - used);
  spectrum_ = std::move(out);
  return *spectrum_;
}

KernelOperator build_kernel(const LevyModel& model, const MassFunction& mass,
                            double r, const Grid& grid,
                            PotentialOptions popts) {
  return KernelOperator(model, mass, r, grid, popts);
}

TopEigenpairs top_eigenpairs(const KernelOperator& op, int k) {
  const int N = op.grid().N;
  if (k > N) throw Error("top_eigenpairs: k exceeds the grid size");
  TopEigenpairs out;
  if (N <= 1400 || k > 64) {
    auto es = eig::dense_symmetric(op.dense(), N, k);
    es.values.resize(k);
    out.mu = std::move(es.values);
    out.vectors = std::move(es.vectors);
  } else {
    auto mv = [&op](const double* x, double* y) { op.matvec(x, y); };
    auto es = eig::lanczos_top(mv, N, k);
    out.mu = std::move(es.values);
    out.vectors = std::move(es.vectors);
  }
  return out;
}

}  // namespace levyspec
