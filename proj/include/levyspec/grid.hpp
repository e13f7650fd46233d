#ifndef LEVYSPEC_GRID_HPP
#define LEVYSPEC_GRID_HPP

#include <vector>

#include "levyspec/errors.hpp"

namespace levyspec {

/// Uniform symmetric grid on [-L, L] with trapezoid weights. N must be
/// odd so that 0 is a node and lags i-j land back on the grid.
struct Grid {
  double L = 0.0;
  int N = 0;
  double h = 0.0;

  Grid() = default;
  Grid(double halfwidth, int nodes) : L(halfwidth), N(nodes) {
    if (!(halfwidth > 0.0)) throw ConfigError("grid halfwidth must be > 0");
    if (nodes < 3 || nodes % 2 == 0)
      throw ConfigError("grid node count must be odd and >= 3");
    h = 2.0 * L / (N - 1);
  }

  // centered so that node (N-1)/2 is exactly 0 and x(-i) = -x(i)
  double x(int i) const { return h * (i - (N - 1) / 2); }
  double w(int i) const { return (i == 0 || i == N - 1) ? 0.5 * h : h; }

  std::vector<double> nodes() const {
    std::vector<double> out(N);
    for (int i = 0; i < N; ++i) out[i] = x(i);
    return out;
  }

  /// Nearest node index; throws OutOfGrid outside [-L, L].
  int index_of(double xq) const {
    if (xq < -L - 0.5 * h || xq > L + 0.5 * h)
      throw OutOfGrid("x outside the grid");
    int i = static_cast<int>((xq + L) / h + 0.5);
    return i < 0 ? 0 : (i >= N ? N - 1 : i);
  }
};

}  // namespace levyspec

#endif
