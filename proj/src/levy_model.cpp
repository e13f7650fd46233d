#include "levyspec/levy_model.hpp"

#include <cmath>
#include <sstream>

#include "levyspec/errors.hpp"
#include "levyspec/numerics.hpp"

namespace levyspec {

LevyModel LevyModel::brownian(double gaussian_coefficient) {
  if (!(gaussian_coefficient > 0.0))
    throw ConditionViolated("Brownian model requires A > 0");
  LevyModel m;
  m.kind_ = LevyKind::Brownian;
  m.gaussian_coefficient_ = gaussian_coefficient;
  return m;
}

LevyModel LevyModel::symmetric_stable(double alpha, double scale) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw ConditionViolated(
        "stable index must lie in (1,2]; the tail integral of 1/|psi| "
        "diverges otherwise (alpha=" +
        std::to_string(alpha) + ")");
  if (!(scale > 0.0)) throw ConditionViolated("stable scale must be positive");
  LevyModel m;
  m.kind_ = LevyKind::SymmetricStable;
  m.alpha_ = alpha;
  m.scale_ = scale;
  return m;
}

LevyModel LevyModel::stable_unchecked(double alpha, double scale) {
  LevyModel m;
  m.kind_ = LevyKind::SymmetricStable;
  m.alpha_ = alpha;
  m.scale_ = scale;
  return m;
}

LevyModel LevyModel::brownian_with_jumps(double gaussian_coefficient,
                                         double jump_rate, JumpKind jump_kind,
                                         double jump_param) {
  if (!(gaussian_coefficient > 0.0))
    throw ConditionViolated(
        "finite-activity jumps need A > 0 for the potential density to exist");
  if (!(jump_rate >= 0.0) || !(jump_param > 0.0))
    throw ConditionViolated("jump rate must be >= 0 and jump parameter > 0");
  LevyModel m;
  m.kind_ = LevyKind::BrownianWithJumps;
  m.gaussian_coefficient_ = gaussian_coefficient;
  m.jump_rate_ = jump_rate;
  m.jump_kind_ = jump_kind;
  m.jump_param_ = jump_param;
  return m;
}

double LevyModel::char_exponent(double y) const {
  switch (kind_) {
    case LevyKind::Brownian:
      return -0.5 * gaussian_coefficient_ * y * y;
    case LevyKind::SymmetricStable:
      return -scale_ * std::pow(std::abs(y), alpha_);
    case LevyKind::BrownianWithJumps: {
      double psi = -0.5 * gaussian_coefficient_ * y * y;
      // Finite-activity part rate*(h_hat(y) - 1) with h_hat the jump
      // density's characteristic function; closed form for the builtins.
      switch (jump_kind_) {
        case JumpKind::TwoPoint:
          psi += jump_rate_ * (std::cos(jump_param_ * y) - 1.0);
          break;
        case JumpKind::Gaussian:
          psi += jump_rate_ *
                 (std::exp(-0.5 * jump_param_ * jump_param_ * y * y) - 1.0);
          break;
        case JumpKind::None:
          break;
      }
      return psi;
    }
  }
  return 0.0;
}

LevyModel::PowerLaw LevyModel::small_y_power_law() const {
  switch (kind_) {
    case LevyKind::Brownian:
      return {2.0, 0.5 * gaussian_coefficient_};
    case LevyKind::SymmetricStable:
      return {alpha_, scale_};
    case LevyKind::BrownianWithJumps: {
      // -psi(y) = (A + rate * m2) y^2/2 + O(y^4), m2 the jump 2nd moment.
      double m2 = jump_param_ * jump_param_;
      return {2.0, 0.5 * (gaussian_coefficient_ + jump_rate_ * m2)};
    }
  }
  return {2.0, 0.0};
}

LevyModel::PowerLaw LevyModel::tail_power_law() const {
  if (kind_ == LevyKind::SymmetricStable) return {alpha_, scale_};
  // The jump part is bounded, so the Gaussian component dominates.
  return {2.0, 0.5 * gaussian_coefficient_};
}

std::string LevyModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case LevyKind::Brownian:
      os << "brownian(A=" << gaussian_coefficient_ << ")";
      break;
    case LevyKind::SymmetricStable:
      os << "stable(alpha=" << alpha_ << ",c=" << scale_ << ")";
      break;
    case LevyKind::BrownianWithJumps:
      os << "brownian_jumps(A=" << gaussian_coefficient_
         << ",rate=" << jump_rate_ << ",param=" << jump_param_ << ")";
      break;
  }
  return os.str();
}

Condition2Report check_condition2(const LevyModel& model) {
  Condition2Report rep;
  // Effective tail exponent from a log-log slope far out, plus the
  // integral over a finite window. Finite-activity jumps only wiggle
  // -psi by a bounded amount, so the slope probe is stable.
  const double y1 = 1.0e3, y2 = 1.0e6;
  double p1 = -model.char_exponent(y1);
  double p2 = -model.char_exponent(y2);
  rep.tail_exponent = std::log(p2 / p1) / std::log(y2 / y1);

  auto integrand = [&](double y) { return 1.0 / (-model.char_exponent(y)); };
  double window = 2.0 * num::gl_geometric(integrand, 1.0, 1.0e6, 1.0);
  double tail = 0.0;
  if (rep.tail_exponent > 1.02) {
    // extrapolate \int_{1e6}^\infty C y^-p dy with C = p2
    tail = 2.0 * (p2 / std::pow(y2, rep.tail_exponent)) *
           std::pow(y2, 1.0 - rep.tail_exponent) / (rep.tail_exponent - 1.0);
    rep.satisfied = true;
  } else {
    rep.satisfied = false;
  }
  rep.integral_estimate = window + tail;
  std::ostringstream os;
  os << "tail exponent " << rep.tail_exponent << ", integral over 1<|y|<1e6 = "
     << window << (rep.satisfied ? " (converges)" : " (diverges)");
  rep.detail = os.str();
  return rep;
}

}  // namespace levyspec
