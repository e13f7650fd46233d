#ifndef LEVYSPEC_MASS_HPP
#define LEVYSPEC_MASS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace levyspec {

/// Time-change density m: positive, continuous, vanishing at infinity,
/// square integrable; optionally integrable. Immutable value object.
class MassFunction {
 public:
  using Eval = std::function<double(double)>;

  /// Builtins: inv_linear, example2_rational, gaussian (param a),
  /// cauchy_like. Throws UnknownName otherwise.
  static MassFunction builtin(const std::string& name, double param = 1.0);

  /// Tabulated (x, m(x)) CSV with linear interpolation inside the table
  /// and algebraic continuation m ~ edge * (edge_x/|x|)^decay beyond it.
  static MassFunction from_csv(const std::string& path, double decay_exponent);

  /// Test fixtures and ad-hoc masses.
  static MassFunction custom(std::string name, Eval eval, bool in_l1,
                             bool in_l2, double linf, double l1, double l2,
                             double tail_exponent);

  double operator()(double x) const { return eval_(x); }
  const std::string& name() const { return name_; }
  bool in_l1() const { return in_l1_; }
  bool in_l2() const { return in_l2_; }
  double linf_norm() const { return linf_; }
  double l1_norm() const;  // throws NotIntegrable unless in_l1
  double l2_norm() const { return l2_; }
  /// Algebraic decay exponent p with m ~ C/|x|^p (infinity for
  /// super-algebraic decay); drives working-domain and tail choices.
  double tail_exponent() const { return tail_exponent_; }
  /// Largest working half-width on which m stays representably positive
  /// (fast-decaying masses underflow long before the default domain).
  double suggested_halfwidth() const { return halfwidth_; }
  /// Exact tail integral \int_X^\infty m when available, else an
  /// estimate from the decay exponent.
  double tail_integral(double X) const;

  /// Characteristic function of m(x)dx at z (real for the symmetric
  /// builtins): \int e^{-izx} m(x) dx. Requires in_l1.
  double fourier(double z) const;

 private:
  MassFunction() = default;
  std::string name_;
  Eval eval_;
  bool in_l1_ = false;
  bool in_l2_ = true;
  double linf_ = 0.0;
  double l1_ = 0.0;
  double l2_ = 0.0;
  double tail_exponent_ = 2.0;
  double halfwidth_ = 40.0;
  std::function<double(double)> exact_tail_;  // \int_X^\infty m, optional
};

/// Condition-1/1' validation: positivity, decay outside the core, the
/// C0 property and the declared L1/L2 flags checked numerically.
struct MassValidation {
  bool pass = false;
  bool in_l1 = false;
  std::vector<std::string> failures;
};
MassValidation validate_conditions(const MassFunction& m, double lo,
                                   double hi);

/// Default Nystrom working half-width for this mass (kernel decay is
/// handled separately by the caller).
double default_halfwidth(const MassFunction& m);

}  // namespace levyspec

#endif
