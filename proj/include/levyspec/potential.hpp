#ifndef LEVYSPEC_POTENTIAL_HPP
#define LEVYSPEC_POTENTIAL_HPP

#include <memory>
#include <vector>

#include "levyspec/levy_model.hpp"

namespace levyspec {

enum class PotentialBackend { Auto, ClosedForm, FourierQuadrature };

struct PotentialOptions {
  PotentialBackend backend = PotentialBackend::Auto;
  double abs_tol = 1e-8;   // absolute accuracy target for v^r(x)
  int panel_order = 16;
  int max_half_periods = 64;
};

/// Killed-potential density v^r(x) = (1/2pi) \int e^{ixy} / (r - psi(y)) dy.
///
/// Brownian models use the closed form exp(-sqrt(2r/A)|x|)/sqrt(2rA);
/// everything else goes through a cosine-transform quadrature with an
/// analytic tail. v^r(0) is cached at construction and reused by all
/// downstream ratios. Immutable, safe for concurrent reads.
class PotentialDensity {
 public:
  PotentialDensity(const LevyModel& model, double kill_rate,
                   PotentialOptions opts = {});

  double value(double x) const;

  struct ValueWithError {
    double value;
    double est_error;
  };
  ValueWithError value_with_error(double x) const;

  double v0() const { return v0_; }
  double kill_rate() const { return r_; }
  const LevyModel& model() const { return model_; }
  PotentialBackend backend() const { return backend_; }
  double abs_tol() const { return opts_.abs_tol; }

  /// One-sided slope s = -(v^r)'(0+) when v has a Lipschitz kink at 0
  /// (models with a Gaussian component); 0 for pure stable (the kink is
  /// |x|^{alpha-1}, not Lipschitz).
  double kink_slope() const;

  /// Bound on the two-sided tail mass \int_{|x|>X} v^r.
  double tail_mass_bound(double X) const;

 private:
  LevyModel model_;
  double r_;
  PotentialOptions opts_;
  PotentialBackend backend_;
  double v0_ = 0.0;
  double decay_rate_ = 0.0;  // sqrt(2r/A) for closed form

  double quadrature_value(double x, double* est_error) const;
};

/// Quadrature of v^r over [-halfwidth, halfwidth]; tests compare it
/// against the exact total mass 1/r.
double potential_l1_check(const PotentialDensity& pd, double halfwidth);

/// Small-r prediction for v^r(0): r^{-(a-1)/a} / (pi c^{1/a}) * I_a for
/// a > 1 and log(1/r)/(c pi) for a = 1, where -psi(y) ~ c|y|^a near 0.
double v0_asymptotic(const LevyModel& model, double r);

/// Dense lookup table of v^r for samplers that evaluate the potential
/// millions of times. Linear interpolation of log v on a uniform grid,
/// with exponential (Gaussian component) or power-law (stable)
/// continuation beyond the table.
class PotentialTable {
 public:
  PotentialTable(const PotentialDensity& pd, double halfwidth, int points);
  double value(double x) const;
  double log_value(double x) const;
  double halfwidth() const { return X_; }

 private:
  double X_;
  double step_;
  std::vector<double> logv_;
  double tail_slope_;   // d(log v)/dx at the right edge
  double edge_x_;
};

}  // namespace levyspec

#endif
