#include "levyspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "levyspec/errors.hpp"
#include "levyspec/numerics.hpp"

namespace levyspec {

namespace {
constexpr double kPi = std::numbers::pi;

// \int_Y^\infty dy / (r + c y^a) as a geometric series in r/(c y^a);
// exact for pure stable exponents, needs r/(c Y^a) < 1.
double stable_tail_integral(double r, double c, double a, double Y) {
  double ratio = r / (c * std::pow(Y, a));
  if (ratio >= 0.9) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double num = 1.0;  // (-r/c)^k
  for (int k = 0; k < 200; ++k) {
    double expo = a * (k + 1) - 1.0;
    double term = num * std::pow(Y, -expo) / expo;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    num *= -r / c;
  }
  return sum / c;
}

// \int_Y^\infty dy / (r + A y^2 / 2), closed form.
double gaussian_tail_integral(double r, double A, double Y) {
  double b = std::sqrt(A / (2.0 * r));
  return std::sqrt(2.0 / (A * r)) * (0.5 * kPi - std::atan(Y * b));
}
}  // namespace

PotentialDensity::PotentialDensity(const LevyModel& model, double kill_rate,
                                   PotentialOptions opts)
    : model_(model), r_(kill_rate), opts_(opts) {
  if (!(r_ > 0.0)) throw ConditionViolated("kill rate must be positive");
  Condition2Report c2 = check_condition2(model_);
  if (!c2.satisfied)
    throw ConditionViolated("potential density undefined: " + c2.detail);

  backend_ = opts_.backend;
  if (backend_ == PotentialBackend::Auto)
    backend_ = model_.kind() == LevyKind::Brownian
                   ? PotentialBackend::ClosedForm
                   : PotentialBackend::FourierQuadrature;
  if (backend_ == PotentialBackend::ClosedForm &&
      model_.kind() != LevyKind::Brownian)
    throw UnsupportedModel("closed-form backend only covers Brownian models");

  if (backend_ == PotentialBackend::ClosedForm) {
    double A = model_.gaussian_coefficient();
    decay_rate_ = std::sqrt(2.0 * r_ / A);
    v0_ = 1.0 / std::sqrt(2.0 * r_ * A);
  } else {
    double err = 0.0;
    v0_ = quadrature_value(0.0, &err);
    if (err > opts_.abs_tol)
      throw CutoffTooSmall("v^r(0) tail remainder " + std::to_string(err) +
                           " exceeds tolerance");
  }
}

double PotentialDensity::quadrature_value(double x, double* est_error) const {
  const auto small = model_.small_y_power_law();
  const auto tail = model_.tail_power_law();
  const double r = r_;
  const LevyModel& model = model_;

  num::CosineTransformSpec spec;
  spec.envelope = [&model, r](double y) {
    return 1.0 / (r - model.char_exponent(y));
  };
  spec.origin_scale = std::pow(r / small.c, 1.0 / small.alpha);
  spec.abs_tol = opts_.abs_tol * kPi * 0.5;
  spec.panel_order = opts_.panel_order;
  spec.max_half_periods = opts_.max_half_periods;

  if (model.kind() == LevyKind::SymmetricStable) {
    double c = tail.c, a = tail.alpha;
    spec.tail_at_zero = [r, c, a](double Y) {
      return stable_tail_integral(r, c, a, Y);
    };
    spec.tail_at_zero_error = [r, c, a](double Y) {
      // The series form is exact once it converges geometrically.
      return r / (c * std::pow(Y, a)) < 0.5
                 ? 0.0
                 : std::numeric_limits<double>::infinity();
    };
  } else {
    double A = model.gaussian_coefficient();
    double rate = model.jump_rate();
    spec.tail_at_zero = [&model, r, A, rate](double Y) {
      // Gaussian closed form; the bounded jump part is folded in by
      // integrating the exact envelope difference over a few panels.
      double base = gaussian_tail_integral(r, A, Y);
      if (rate == 0.0) return base;
      auto diff = [&model, r, A](double y) {
        return 1.0 / (r - model.char_exponent(y)) -
               1.0 / (r + 0.5 * A * y * y);
      };
      double corr = num::gl_geometric(diff, Y, Y * 4096.0, Y);
      return base + corr;
    };
    spec.tail_at_zero_error = [r, A, rate](double Y) {
      if (!(Y > 0.0)) return std::numeric_limits<double>::infinity();
      if (0.5 * A * Y * Y < 8.0 * r)
        return std::numeric_limits<double>::infinity();
      double q = 0.5 * A * Y * Y;
      double base_ok = 0.0;
      // residual of the jump correction beyond the integrated window
      double beyond = rate > 0.0
                          ? 8.0 * rate / (3.0 * A * A * std::pow(4096.0 * Y, 3))
                          : 0.0;
      return base_ok + beyond + 1e-16 / q;
    };
  }

  auto res = num::cosine_transform(spec, x);
  if (est_error) *est_error = res.est_error / kPi;
  return std::max(0.0, res.value / kPi);
}

double PotentialDensity::value(double x) const {
  if (backend_ == PotentialBackend::ClosedForm)
    return std::exp(-decay_rate_ * std::abs(x)) * v0_;
  return quadrature_value(x, nullptr);
}

PotentialDensity::ValueWithError PotentialDensity::value_with_error(
    double x) const {
  if (backend_ == PotentialBackend::ClosedForm)
    return {std::exp(-decay_rate_ * std::abs(x)) * v0_, 0.0};
  double err = 0.0;
  double v = quadrature_value(x, &err);
  if (err > opts_.abs_tol)
    throw CutoffTooSmall("v^r tail remainder " + std::to_string(err) +
                         " exceeds tolerance at x=" + std::to_string(x));
  return {v, err};
}

double PotentialDensity::kink_slope() const {
  if (model_.kind() == LevyKind::SymmetricStable) return 0.0;
  return 1.0 / model_.gaussian_coefficient();
}

double PotentialDensity::tail_mass_bound(double X) const {
  if (backend_ == PotentialBackend::ClosedForm)
    return std::exp(-decay_rate_ * X) / r_;
  // v is even, decreasing and integrates to 1/r; sum doubling blocks
  // with the left-endpoint value as an upper bound on each block.
  double bound = 0.0, left = X;
  for (int k = 0; k < 60; ++k) {
    double blk = value(left) * left;  // block [left, 2 left]
    bound += blk;
    if (blk < 1e-14) break;
    left *= 2.0;
  }
  return 2.0 * bound;
}

double potential_l1_check(const PotentialDensity& pd, double halfwidth) {
  auto f = [&pd](double x) { return pd.value(x); };
  // fine start: v has a (possibly fractional-power) kink at the origin
  double scale = std::min(1.0, halfwidth) / 1024.0;
  return 2.0 * num::gl_geometric(f, 0.0, halfwidth, scale);
}

double v0_asymptotic(const LevyModel& model, double r) {
  auto law = model.small_y_power_law();
  if (!(law.c > 0.0))
    throw UnsupportedModel("no small-y power law for this model");
  if (std::abs(law.alpha - 1.0) < 1e-12)
    return std::log(1.0 / r) / (law.c * kPi);
  if (law.alpha <= 1.0)
    throw UnsupportedModel("v^r(0) asymptotics need alpha >= 1");
  // \int_0^\infty du/(1+u^a) = (pi/a) csc(pi/a)
  double I = (kPi / law.alpha) / std::sin(kPi / law.alpha);
  return std::pow(r, -(law.alpha - 1.0) / law.alpha) * I /
         (kPi * std::pow(law.c, 1.0 / law.alpha));
}

PotentialTable::PotentialTable(const PotentialDensity& pd, double halfwidth,
                               int points)
    : X_(halfwidth), step_(halfwidth / (points - 1)) {
  logv_.resize(points);
  for (int i = 0; i < points; ++i) logv_[i] = std::log(pd.value(i * step_));
  edge_x_ = X_;
  tail_slope_ = (logv_[points - 1] - logv_[points - 2]) / step_;
}

double PotentialTable::log_value(double x) const {
  x = std::abs(x);
  if (x >= X_) return logv_.back() + tail_slope_ * (x - edge_x_);
  double t = x / step_;
  auto i = static_cast<size_t>(t);
  if (i + 1 >= logv_.size()) return logv_.back();
  double frac = t - static_cast<double>(i);
  return logv_[i] * (1.0 - frac) + logv_[i + 1] * frac;
}

double PotentialTable::value(double x) const { return std::exp(log_value(x)); }

}  // namespace levyspec
