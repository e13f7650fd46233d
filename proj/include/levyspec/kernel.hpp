#ifndef LEVYSPEC_KERNEL_HPP
#define LEVYSPEC_KERNEL_HPP

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "levyspec/grid.hpp"
#include "levyspec/mass.hpp"
#include "levyspec/potential.hpp"

namespace levyspec {

/// Nystrom matrix of the symmetric kernel sqrt(m(x) m(y)) v^r(x - y) on a
/// uniform grid:  S_ij = sqrt(w_i m_i) * v^r(x_i - x_j) * sqrt(w_j m_j).
///
/// On a uniform grid v^r only enters through the lag table v^r(k h), so
/// the operator is stored as (u, vlag) and matrix-vector products cost
/// O(N^2) with no N^2 storage. The dense matrix is materialized only for
/// the full eigendecomposition.
class KernelOperator {
 public:
  KernelOperator(const LevyModel& model, const MassFunction& mass, double r,
                 const Grid& grid, PotentialOptions popts = {});

  const Grid& grid() const { return grid_; }
  const LevyModel& model() const { return model_; }
  const MassFunction& mass() const { return mass_; }
  const PotentialDensity& potential() const { return *potential_; }
  double kill_rate() const { return r_; }
  double v0() const { return potential_->v0(); }

  double entry(int i, int j) const;
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& vlag() const { return vlag_; }
  const std::vector<double>& mass_values() const { return mvals_; }

  void matvec(const double* x, double* y) const;
  std::vector<double> dense() const;  // row-major, (S + S^T)/2

  double trace() const;
  double frobenius_sq() const;

  /// Quadrature of m over the grid, Sum w_i m_i.
  double mass_quadrature() const;

  /// Test hook: flip the sign of entry (i, j) (mirrored to keep S
  /// symmetric). Used by the verification battery's tamper check.
  void tamper_entry(int i, int j);

  struct FullSpectrum {
    std::vector<double> mu;                    // all eigenvalues, descending
    std::vector<std::vector<double>> vectors;  // top k, orthonormal
    std::vector<double> betas;                 // <m, q_n> for n <= k
    double residual_beta_sq = 0.0;             // Sum_{n>k} beta_n^2
    int k = 0;
  };
  /// Full dense spectrum with at least `k_vectors` leading eigenvectors;
  /// computed once and cached (thread-safe).
  const FullSpectrum& full_spectrum(int k_vectors) const;

 private:
  LevyModel model_;
  MassFunction mass_;
  double r_;
  Grid grid_;
  std::shared_ptr<const PotentialDensity> potential_;
  std::vector<double> u_;      // sqrt(w_i m_i)
  std::vector<double> mvals_;  // m(x_i)
  std::vector<double> vlag_;   // v^r(k h)
  int tamper_i_ = -1, tamper_j_ = -1;

  mutable std::mutex spectrum_mutex_;
  mutable std::unique_ptr<FullSpectrum> spectrum_;
};

KernelOperator build_kernel(const LevyModel& model, const MassFunction& mass,
                            double r, const Grid& grid,
                            PotentialOptions popts = {});

/// Leading eigenpairs (mu_1..mu_k descending, Euclidean-orthonormal
/// vectors), deterministic up to sign. Small problems or large k use
/// the dense path; otherwise matrix-free Lanczos on the lag structure.
struct TopEigenpairs {
  std::vector<double> mu;
  std::vector<std::vector<double>> vectors;
};
TopEigenpairs top_eigenpairs(const KernelOperator& op, int k);

}  // namespace levyspec

#endif
