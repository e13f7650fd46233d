#include "levyspec/mass.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "levyspec/errors.hpp"
#include "levyspec/numerics.hpp"

namespace levyspec {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

MassFunction MassFunction::builtin(const std::string& name, double param) {
  MassFunction m;
  if (name == "inv_linear") {
    m.name_ = name;
    m.eval_ = [](double x) { return 1.0 / (1.0 + std::abs(x)); };
    m.in_l1_ = false;
    m.in_l2_ = true;
    m.linf_ = 1.0;
    m.l1_ = kInf;
    m.l2_ = std::sqrt(2.0);
    m.tail_exponent_ = 1.0;
    m.halfwidth_ = 60.0;
    m.exact_tail_ = [](double) { return kInf; };
  } else if (name == "example2_rational") {
    m.name_ = name;
    m.eval_ = [](double x) {
      double a = std::abs(x);
      double u = 1.0 + a;
      return (2.0 * x * x + 6.0 * a + 3.0) / (u * u * u * u);
    };
    m.in_l1_ = true;
    m.in_l2_ = true;
    m.linf_ = 3.0;
    m.l1_ = 16.0 / 3.0;
    // \int m^2 = 2 \int_1^\infty (4u^4+8u^3-4u+1)/u^8 du
    m.l2_ = std::sqrt(2.0 * (4.0 / 3.0 + 2.0 - 4.0 / 6.0 + 1.0 / 7.0));
    m.tail_exponent_ = 2.0;
    m.exact_tail_ = [](double X) {
      // with u = 1+X: \int_X^\infty m = 2/u + 1/u^2 - 1/(3u^3)
      double u = 1.0 + X;
      return 2.0 / u + 1.0 / (u * u) - 1.0 / (3.0 * u * u * u);
    };
  } else if (name == "gaussian") {
    if (!(param > 0.0)) throw UnknownName("gaussian mass needs a > 0");
    double a = param;
    m.name_ = "gaussian(" + std::to_string(a) + ")";
    m.eval_ = [a](double x) { return std::exp(-a * x * x); };
    m.in_l1_ = true;
    m.in_l2_ = true;
    m.linf_ = 1.0;
    m.l1_ = std::sqrt(kPi / a);
    m.l2_ = std::pow(kPi / (2.0 * a), 0.25);
    m.tail_exponent_ = kInf;
    m.halfwidth_ = std::min(40.0, std::sqrt(560.0 / a));
    m.exact_tail_ = [a](double X) {
      return 0.5 * std::sqrt(kPi / a) * std::erfc(std::sqrt(a) * X);
    };
  } else if (name == "cauchy_like") {
    m.name_ = name;
    m.eval_ = [](double x) { return 1.0 / (1.0 + x * x); };
    m.in_l1_ = true;
    m.in_l2_ = true;
    m.linf_ = 1.0;
    m.l1_ = kPi;
    m.l2_ = std::sqrt(kPi / 2.0);
    m.tail_exponent_ = 2.0;
    m.exact_tail_ = [](double X) { return 0.5 * kPi - std::atan(X); };
  } else {
    throw UnknownName("unknown mass builtin: " + name);
  }
  return m;
}

MassFunction MassFunction::from_csv(const std::string& path,
                                    double decay_exponent) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mass CSV: " + path);
  auto xs = std::make_shared<std::vector<double>>();
  auto ms = std::make_shared<std::vector<double>>();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, v;
    if (ls >> x >> v) {
      if (!(v > 0.0))
        throw ConfigError("mass CSV has a non-positive value at x=" +
                          std::to_string(x));
      xs->push_back(x);
      ms->push_back(v);
    }
  }
  if (xs->size() < 4) throw ConfigError("mass CSV needs at least 4 rows");
  for (size_t i = 1; i < xs->size(); ++i)
    if ((*xs)[i] <= (*xs)[i - 1])
      throw ConfigError("mass CSV x-column must be strictly increasing");

  double edge_x = std::max(std::abs(xs->front()), std::abs(xs->back()));
  double edge_m = 0.5 * (ms->front() + ms->back());
  double p = decay_exponent;

  MassFunction m;
  m.name_ = "csv:" + path;
  m.eval_ = [xs, ms, edge_x, edge_m, p](double x) {
    double a = std::abs(x);
    if (x < xs->front() || x > xs->back()) {
      double base = std::max(edge_x, 1e-9);
      return edge_m * std::pow(base / std::max(a, base), p);
    }
    auto it = std::upper_bound(xs->begin(), xs->end(), x);
    size_t i = std::max<size_t>(1, it - xs->begin()) - 1;
    i = std::min(i, xs->size() - 2);
    double t = (x - (*xs)[i]) / ((*xs)[i + 1] - (*xs)[i]);
    return (*ms)[i] * (1.0 - t) + (*ms)[i + 1] * t;
  };
  m.tail_exponent_ = p;
  m.in_l1_ = p > 1.0;
  m.in_l2_ = p > 0.5;
  m.linf_ = *std::max_element(ms->begin(), ms->end());
  if (m.in_l1_) {
    m.l1_ = num::adaptive_simpson([&m](double x) { return m.eval_(x); },
                                  xs->front(), xs->back(), 1e-10) +
            2.0 * edge_m * edge_x / (p - 1.0);
  } else {
    m.l1_ = kInf;
  }
  m.l2_ = std::sqrt(num::adaptive_simpson(
      [&m](double x) { double v = m.eval_(x); return v * v; }, xs->front() * 4,
      xs->back() * 4, 1e-10));
  m.exact_tail_ = [edge_x, edge_m, p](double X) {
    if (p <= 1.0) return kInf;
    double base = std::max(edge_x, 1e-9);
    return edge_m * base * std::pow(base / std::max(X, base), p - 1.0) /
           (p - 1.0);
  };
  return m;
}

MassFunction MassFunction::custom(std::string name, Eval eval, bool in_l1,
                                  bool in_l2, double linf, double l1,
                                  double l2, double tail_exponent) {
  MassFunction m;
  m.name_ = std::move(name);
  m.eval_ = std::move(eval);
  m.in_l1_ = in_l1;
  m.in_l2_ = in_l2;
  m.linf_ = linf;
  m.l1_ = l1;
  m.l2_ = l2;
  m.tail_exponent_ = tail_exponent;
  return m;
}

double MassFunction::l1_norm() const {
  if (!in_l1_) throw NotIntegrable("mass '" + name_ + "' is not in L1");
  return l1_;
}

double MassFunction::tail_integral(double X) const {
  if (exact_tail_) return exact_tail_(X);
  if (tail_exponent_ <= 1.0) return kInf;
  return eval_(X) * X / (tail_exponent_ - 1.0);
}

double MassFunction::fourier(double z) const {
  if (!in_l1_)
    throw NotIntegrable("Fourier transform needs m in L1 ('" + name_ + "')");
  // Symmetric masses: m_hat(z) = 2 \int_0^\infty m(x) cos(z x) dx.
  num::CosineTransformSpec spec;
  spec.envelope = [this](double y) { return eval_(y); };
  spec.origin_scale = 1.0;
  spec.abs_tol = 1e-9;
  spec.tail_at_zero = [this](double Y) { return tail_integral(Y); };
  spec.tail_at_zero_error = [this](double Y) {
    return exact_tail_ ? 0.0 : tail_integral(Y) * 0.05;
  };
  auto res = num::cosine_transform(spec, z);
  return 2.0 * res.value;
}

MassValidation validate_conditions(const MassFunction& m, double lo,
                                   double hi) {
  MassValidation rep;
  rep.in_l1 = m.in_l1();
  bool ok = true;

  const int samples = 4001;
  double prev_abs = 0.0;
  double max_val = 0.0;
  bool positive = true, decays = true;
  double m_core = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x = lo + (hi - lo) * i / (samples - 1.0);
    double v = m(x);
    if (!(v > 0.0)) positive = false;
    max_val = std::max(max_val, v);
    if (std::abs(x) <= 1.0) m_core = std::max(m_core, v);
    (void)prev_abs;
    prev_abs = v;
  }
  if (!positive) {
    ok = false;
    rep.failures.push_back("positivity: m(x) <= 0 somewhere in the domain");
  }

  // monotone decay outside the core |x| >= 1
  for (double sgn : {-1.0, 1.0}) {
    double prev = m(sgn * 1.0);
    for (double a = 1.25; a <= std::max(std::abs(lo), std::abs(hi));
         a *= 1.25) {
      double v = m(sgn * a);
      if (v > prev * (1.0 + 1e-9)) {
        decays = false;
        break;
      }
      prev = v;
    }
  }
  if (!decays) {
    ok = false;
    rep.failures.push_back("decay: m increases somewhere outside |x| >= 1");
  }

  // C0: vanishing at the domain ends relative to the core
  double edge = std::max(m(lo), m(hi));
  if (!(edge < 0.5 * m_core)) {
    ok = false;
    rep.failures.push_back("C0: m does not vanish toward infinity");
  }

  // L2 tail sanity: v^2 * |x| shrinking at the edge
  double l2tail = m(hi) * m(hi) * std::abs(hi);
  if (!(l2tail < 0.25 * m_core * m_core)) {
    ok = false;
    rep.failures.push_back("L2: squared tail is not integrable");
  }

  // declared L1 flag vs quadrature over the window + tail estimate
  if (m.in_l1()) {
    double w = num::adaptive_simpson([&m](double x) { return m(x); }, lo, hi,
                                     1e-9);
    double tail = m.tail_integral(std::max(std::abs(lo), std::abs(hi)));
    double total = w + 2.0 * tail;
    if (!(std::abs(total - m.l1_norm()) <
          1e-4 * m.l1_norm() + 2.5 * tail)) {
      ok = false;
      rep.failures.push_back("L1: quadrature disagrees with declared norm");
    }
  }

  rep.pass = ok;
  return rep;
}

double default_halfwidth(const MassFunction& m) {
  return m.suggested_halfwidth();
}

}  // namespace levyspec
