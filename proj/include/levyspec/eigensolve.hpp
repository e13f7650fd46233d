#ifndef LEVYSPEC_EIGENSOLVE_HPP
#define LEVYSPEC_EIGENSOLVE_HPP

#include <functional>
#include <vector>

namespace levyspec::eig {

/// Matrix-vector product y = A x for a symmetric operator of dimension n.
using MatVec = std::function<void(const double* x, double* y)>;

struct Spectrum {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // Euclidean-orthonormal, top k
};

/// Full dense symmetric eigendecomposition (row-major n x n input);
/// returns all eigenvalues descending and the top `k` eigenvectors.
Spectrum dense_symmetric(const std::vector<double>& matrix, int n, int k);

/// Eigenvalues only (descending); roughly 3x faster than the full
/// decomposition for large n.
std::vector<double> dense_symmetric_values(const std::vector<double>& matrix,
                                           int n);

/// Lanczos with full reorthogonalization for the leading `k` eigenpairs
/// of a symmetric positive operator. Deterministic start vector.
/// Throws ConvergenceFailure if the residuals do not settle.
struct LanczosOptions {
  int max_iter = 400;
  double tol = 1e-11;
};
Spectrum lanczos_top(const MatVec& apply, int n, int k,
                     LanczosOptions opts = {});

}  // namespace levyspec::eig

#endif
