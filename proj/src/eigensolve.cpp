#include "levyspec/eigensolve.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "levyspec/errors.hpp"

namespace levyspec::eig {

Spectrum dense_symmetric(const std::vector<double>& matrix, int n, int k) {
  if (static_cast<long>(n) * n != static_cast<long>(matrix.size()))
    throw Error("dense_symmetric: size mismatch");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      M(matrix.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("dense symmetric eigensolver did not converge");

  Spectrum out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = es.eigenvalues()(n - 1 - i);
  k = std::min(k, n);
  out.vectors.resize(k);
  for (int j = 0; j < k; ++j) {
    out.vectors[j].resize(n);
    for (int i = 0; i < n; ++i) out.vectors[j][i] = es.eigenvectors()(i, n - 1 - j);
  }
  return out;
}

std::vector<double> dense_symmetric_values(const std::vector<double>& matrix,
                                           int n) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      M(matrix.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("dense symmetric eigensolver did not converge");
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = es.eigenvalues()(n - 1 - i);
  return values;
}

Spectrum lanczos_top(const MatVec& apply, int n, int k, LanczosOptions opts) {
  const int m_max = std::min(opts.max_iter, n);
  std::vector<std::vector<double>> basis;
  basis.reserve(m_max + 1);
  std::vector<double> alpha, beta;

  // Deterministic positive-leaning start: the kernel is a positive
  // operator, so this overlaps the Perron vector.
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = 1.0 + 1e-3 * std::sin(0.7 * i + 0.3);
  double nrm = 0.0;
  for (double t : v) nrm += t * t;
  nrm = std::sqrt(nrm);
  for (double& t : v) t /= nrm;
  basis.push_back(v);

  std::vector<double> w(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;

  auto ritz_converged = [&](int m) -> bool {
    if (m < std::min(n, std::max(2 * k + 6, 24))) return false;
    Eigen::VectorXd d(m), e(m > 1 ? m - 1 : 1);
    for (int i = 0; i < m; ++i) d(i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) e(i) = beta[i];
    tri.computeFromTridiagonal(d, e.head(std::max(0, m - 1)));
    if (tri.info() != Eigen::Success) return false;
    double beta_last = beta.empty() ? 0.0 : beta.back();
    for (int j = 0; j < k; ++j) {
      int col = m - 1 - j;
      double theta = tri.eigenvalues()(col);
      double resid = std::abs(beta_last * tri.eigenvectors()(m - 1, col));
      if (resid > opts.tol * std::max(std::abs(theta), 1e-30)) return false;
    }
    return true;
  };

  int m = 0;
  bool done = false;
  for (; m < m_max; ++m) {
    apply(basis[m].data(), w.data());
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += basis[m][i] * w[i];
    alpha.push_back(a);

    for (int i = 0; i < n; ++i) w[i] -= a * basis[m][i];
    if (m > 0)
      for (int i = 0; i < n; ++i) w[i] -= beta[m - 1] * basis[m - 1][i];

    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double proj = 0.0;
        for (int i = 0; i < n; ++i) proj += q[i] * w[i];
        for (int i = 0; i < n; ++i) w[i] -= proj * q[i];
      }
    }

    double b = 0.0;
    for (int i = 0; i < n; ++i) b += w[i] * w[i];
    b = std::sqrt(b);
    if (b < 1e-14 || m + 1 == m_max || m + 1 == n) {
      if (b >= 1e-14) beta.push_back(b);
      done = b < 1e-14;  // exact invariant subspace
      ++m;
      break;
    }
    beta.push_back(b);
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) next[i] = w[i] / b;
    basis.push_back(std::move(next));

    if ((m + 1) % 8 == 0 && ritz_converged(m + 1)) {
      ++m;
      done = true;
      break;
    }
  }
  if (static_cast<int>(alpha.size()) < k)
    throw ConvergenceFailure("lanczos: breakdown before " +
                             std::to_string(k) + " pairs");
  int dim = static_cast<int>(alpha.size());
  if (!done && !ritz_converged(dim))
    throw ConvergenceFailure("lanczos: top-" + std::to_string(k) +
                             " pairs not converged after " +
                             std::to_string(dim) + " iterations");

  Eigen::VectorXd d(dim), e(std::max(0, dim - 1));
  for (int i = 0; i < dim; ++i) d(i) = alpha[i];
  for (int i = 0; i + 1 < dim; ++i) e(i) = beta[i];
  tri.computeFromTridiagonal(d, e);
  if (tri.info() != Eigen::Success)
    throw ConvergenceFailure("lanczos: tridiagonal solve failed");

  Spectrum out;
  out.values.resize(k);
  out.vectors.assign(k, std::vector<double>(n, 0.0));
  for (int j = 0; j < k; ++j) {
    int col = dim - 1 - j;
    out.values[j] = tri.eigenvalues()(col);
    auto& x = out.vectors[j];
    for (int t = 0; t < dim; ++t) {
      double y = tri.eigenvectors()(t, col);
      const auto& q = basis[t];
      for (int i = 0; i < n; ++i) x[i] += y * q[i];
    }
    double s = 0.0;
    for (double t : x) s += t * t;
    s = 1.0 / std::sqrt(s);
    for (double& t : x) t *= s;
  }
  return out;
}

}  // namespace levyspec::eig
