#ifndef LEVYSPEC_NUMERICS_HPP
#define LEVYSPEC_NUMERICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace levyspec::num {

using Fn1 = std::function<double(double)>;

/// Gauss-Legendre nodes and weights on [-1,1], cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// \int_a^b f, single Gauss-Legendre panel of the given order.
double gl_panel(const Fn1& f, double a, double b, int order = 16);

/// Composite panels with geometric subdivision from `a` toward `b`,
/// first panel of width `scale`. Suited to integrands that vary on
/// scale `scale` near `a` and flatten out beyond.
double gl_geometric(const Fn1& f, double a, double b, double scale,
                    int order = 16);

/// Classic adaptive Simpson with absolute tolerance.
double adaptive_simpson(const Fn1& f, double a, double b, double tol,
                        int max_depth = 48);

/// Sum of the alternating series sum_k (-1)^k c_k (c_k >= 0) by the
/// Cohen-Rodriguez Villegas-Zagier Chebyshev acceleration. The error
/// decreases like (3+sqrt(8))^-n for totally monotone coefficients.
double alternating_sum_cvz(std::span<const double> c);

/// Semi-infinite cosine transform  T(x) = \int_0^\infty f(y) cos(x y) dy
/// for a smooth envelope f that decays at infinity.
///
/// Strategy: Gauss panels (geometric from the origin at `origin_scale`)
/// up to the first zero of the cosine, then half-period slices summed
/// with series acceleration. At x = 0 the oscillatory machinery is
/// bypassed: panels run until `tail_at_zero` (an analytic tail integral
/// \int_Y^\infty f supplied by the caller) takes over.
struct CosineTransformSpec {
  Fn1 envelope;                               // f(y), y >= 0
  double origin_scale = 1.0;                  // variation scale of f near 0
  double abs_tol = 1e-9;
  std::function<double(double)> tail_at_zero; // \int_Y^\infty f(y) dy
  std::function<double(double)> tail_at_zero_error;  // its error at Y
  int panel_order = 16;
  int max_half_periods = 64;
};
struct CosineTransformResult {
  double value = 0.0;
  double est_error = 0.0;
};
CosineTransformResult cosine_transform(const CosineTransformSpec& spec,
                                       double x);

/// SplitMix64 mix; used to derive independent per-worker RNG streams
/// from a master seed.
std::uint64_t splitmix64(std::uint64_t state);

/// Wilson 95% score interval for `successes` out of `trials`.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                         double z = 1.959963984540054);

/// Weighted least squares line y ~ a + b x. Returns slope/intercept and
/// the slope standard error implied by the weights.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> w);

}  // namespace levyspec::num

#endif
