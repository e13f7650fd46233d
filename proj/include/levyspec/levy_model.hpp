#ifndef LEVYSPEC_LEVY_MODEL_HPP
#define LEVYSPEC_LEVY_MODEL_HPP

#include <string>

namespace levyspec {

enum class LevyKind { Brownian, SymmetricStable, BrownianWithJumps };

enum class JumpKind { None, TwoPoint, Gaussian };

/// A symmetric Levy process described by its characteristic exponent
/// psi(y) = -A y^2 / 2 + jump part. Immutable after construction.
///
/// The stable index is restricted to (1, 2] at construction; the killed
/// potential density does not exist below that (the tail integral of
/// 1/|psi| diverges). `stable_unchecked` bypasses the check so tests can
/// exercise the rejection path and the alpha = 1 asymptotics.
class LevyModel {
 public:
  static LevyModel brownian(double gaussian_coefficient);
  static LevyModel symmetric_stable(double alpha, double scale);
  static LevyModel brownian_with_jumps(double gaussian_coefficient,
                                       double jump_rate, JumpKind jump_kind,
                                       double jump_param);
  static LevyModel stable_unchecked(double alpha, double scale);

  LevyKind kind() const { return kind_; }
  double gaussian_coefficient() const { return gaussian_coefficient_; }
  double stable_index() const { return alpha_; }
  double stable_scale() const { return scale_; }
  double jump_rate() const { return jump_rate_; }
  JumpKind jump_kind() const { return jump_kind_; }
  double jump_param() const { return jump_param_; }

  /// psi(y); total on the reals, <= 0, even, psi(0) = 0.
  double char_exponent(double y) const;

  /// Small-y power law: -psi(y) ~ c |y|^alpha.
  struct PowerLaw {
    double alpha = 2.0;
    double c = 0.0;
  };
  PowerLaw small_y_power_law() const;

  /// Exact large-y behaviour of -psi used for analytic quadrature tails.
  PowerLaw tail_power_law() const;

  std::string describe() const;

 private:
  LevyModel() = default;
  LevyKind kind_ = LevyKind::Brownian;
  double gaussian_coefficient_ = 0.0;
  double alpha_ = 2.0;
  double scale_ = 0.0;
  double jump_rate_ = 0.0;
  JumpKind jump_kind_ = JumpKind::None;
  double jump_param_ = 0.0;
};

/// Condition-2 verdict: finiteness of int_{|y|>1} dy / |psi(y)|.
struct Condition2Report {
  bool satisfied = false;
  double tail_exponent = 0.0;   // effective p with -psi ~ C y^p at infinity
  double integral_estimate = 0.0;
  std::string detail;
};
Condition2Report check_condition2(const LevyModel& model);

}  // namespace levyspec

#endif
