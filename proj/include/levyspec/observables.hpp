#ifndef LEVYSPEC_OBSERVABLES_HPP
#define LEVYSPEC_OBSERVABLES_HPP

#include <algorithm>
#include <vector>

#include "levyspec/grid.hpp"

namespace levyspec {

/// Smoothed indicator of [0.25, 1.75] with 0.5-wide shoulders. Centered
/// off the origin on purpose: it overlaps the odd modes, so two-point
/// correlations decay at the true rate log(lambda_2/lambda_1).
inline double bump_observable(double x) {
  auto sstep = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
  };
  return sstep((x - 0.25) / 0.5) * sstep((1.75 - x) / 0.5);
}

inline std::vector<double> tabulate(const Grid& grid, double (*f)(double)) {
  std::vector<double> out(grid.N);
  for (int i = 0; i < grid.N; ++i) out[i] = f(grid.x(i));
  return out;
}

/// Exact bin masses of a piecewise-linear density tabulated on the grid
/// over uniform bins [lo + b w, lo + (b+1) w). Free of the aliasing that
/// node-count binning suffers when w is incommensurate with the grid
/// step.
inline std::vector<double> bin_density_linear(const Grid& grid,
                                              const std::vector<double>& d,
                                              double lo, double w, int nbins) {
  std::vector<double> mass(nbins, 0.0);
  auto add_segment = [&](double a, double b, double da, double db) {
    // integrate the linear interpolant over the overlap with each bin
    if (b <= a) return;
    int b0 = static_cast<int>(std::floor((a - lo) / w));
    int b1 = static_cast<int>(std::floor((b - lo) / w));
    for (int bin = std::max(0, b0); bin <= std::min(nbins - 1, b1); ++bin) {
      double s = std::max(a, lo + bin * w);
      double t = std::min(b, lo + (bin + 1) * w);
      if (t <= s) continue;
      double vs = da + (db - da) * (s - a) / (b - a);
      double vt = da + (db - da) * (t - a) / (b - a);
      mass[bin] += 0.5 * (vs + vt) * (t - s);
    }
  };
  for (int i = 0; i + 1 < grid.N; ++i)
    add_segment(grid.x(i), grid.x(i + 1), d[i], d[i + 1]);
  return mass;
}

}  // namespace levyspec

#endif
