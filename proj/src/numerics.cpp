#include "levyspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace levyspec::num {

namespace {

GaussRule compute_gauss_legendre(int order) {
  // Newton iteration on the Legendre recurrence; nodes come in +- pairs.
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const Fn1& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole,
                            double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, flm, m, fm);
  double right = simpson(m, fm, frm, b, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double gl_panel(const Fn1& f, double a, double b, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  return sum * h;
}

double gl_geometric(const Fn1& f, double a, double b, double scale, int order) {
  if (b <= a) return 0.0;
  double total = 0.0;
  double left = a;
  double width = std::min(scale, b - a);
  while (left < b) {
    double right = std::min(left + width, b);
    total += gl_panel(f, left, right, order);
    left = right;
    width *= 2.0;
  }
  return total;
}

double adaptive_simpson(const Fn1& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = simpson(a, fa, fm, b, fb);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double alternating_sum_cvz(std::span<const double> c) {
  const int n = static_cast<int>(c.size());
  if (n == 0) return 0.0;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, acc = -d, s = 0.0;
  for (int k = 0; k < n; ++k) {
    acc = b - acc;
    s += acc * c[k];
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

namespace {
// Integrate envelope * cos over [a,b], bisecting while a panel is wide
// compared to the local envelope scale max(origin_scale, a/2).
double stiff_panel(const Fn1& f, double a, double b, double scale, int order,
                   int depth = 0) {
  if (depth < 24 && (b - a) > std::max(scale, 0.5 * a)) {
    double m = 0.5 * (a + b);
    return stiff_panel(f, a, m, scale, order, depth + 1) +
           stiff_panel(f, m, b, scale, order, depth + 1);
  }
  return gl_panel(f, a, b, order);
}
}  // namespace

CosineTransformResult cosine_transform(const CosineTransformSpec& spec,
                                       double x) {
  const double pi = std::numbers::pi;
  x = std::abs(x);
  CosineTransformResult out;

  // Envelopes with fractional-power kinks at the origin (stable
  // exponents, masses with |x| kinks) need the first panels much finer
  // than the nominal scale; doubling recovers the scale in ~10 panels.
  const double w0 = spec.origin_scale / 1024.0;

  if (x == 0.0) {
    // Monotone case: geometric panels out to where the analytic tail
    // becomes exact enough, then hand over to it.
    double y = 0.0;
    double width = w0;
    double value = 0.0;
    for (int p = 0; p < 400; ++p) {
      if (y > 0.0 && spec.tail_at_zero) {
        double terr = spec.tail_at_zero_error ? spec.tail_at_zero_error(y)
                                              : spec.envelope(y) * y;
        if (terr < 0.1 * spec.abs_tol) {
          out.value = value + spec.tail_at_zero(y);
          out.est_error = terr;
          return out;
        }
      }
      double fy = spec.envelope(y + 0.5 * width);
      if (p > 12 && fy * y < 1e-3 * spec.abs_tol) {
        // Envelope effectively dead (super-algebraic decay).
        out.value = value;
        out.est_error = fy * y;
        return out;
      }
      double right = y + width;
      value += gl_panel(spec.envelope, y, right, spec.panel_order);
      y = right;
      width *= 2.0;
    }
    out.value = value + (spec.tail_at_zero ? spec.tail_at_zero(y) : 0.0);
    out.est_error = spec.envelope(y) * y;
    return out;
  }

  auto integrand = [&](double y) { return spec.envelope(y) * std::cos(x * y); };

  // Bulk: up to the first zero of cos(x y); phase stays below pi/2 so the
  // geometric panels only have to resolve the envelope.
  const double zfirst = 0.5 * pi / x;
  double value = gl_geometric(integrand, 0.0, zfirst, std::min(w0, zfirst),
                              spec.panel_order);

  // Half-period slices from zfirst on. They alternate in sign when the
  // envelope decays monotonically; accelerate, with a plain-sum fallback
  // when alternation is broken (oscillatory characteristic exponents).
  const double hp = pi / x;
  std::vector<double> terms;
  terms.reserve(spec.max_half_periods);
  double z = zfirst;
  bool alternating = true;
  double prev = 0.0;
  for (int k = 0; k < spec.max_half_periods; ++k) {
    double t = stiff_panel(integrand, z, z + hp, spec.origin_scale, 12);
    z += hp;
    terms.push_back(t);
    if (k > 0 && t * prev > 0.0) alternating = false;
    prev = t;
    if (std::abs(t) < 0.05 * spec.abs_tol && k >= 4) break;
  }

  // The accelerated sum extrapolates the whole alternating tail; its
  // error is estimated by stability under dropping the last few slices.
  // The plain-sum fallback is bracketed by consecutive partial sums.
  double tail_sum;
  double tail_err;
  double last = std::abs(terms.back());
  if (alternating && terms.size() >= 6) {
    std::vector<double> mags(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) mags[i] = std::abs(terms[i]);
    double sign = terms[0] < 0.0 ? -1.0 : 1.0;
    double full = alternating_sum_cvz(mags);
    std::vector<double> shorter(mags.begin(), mags.end() - 4);
    double check = alternating_sum_cvz(shorter);
    tail_sum = sign * full;
    tail_err = std::abs(full - check) + 1e-15 * std::abs(value);
  } else {
    double s = 0.0, s_prev = 0.0;
    for (double t : terms) {
      s_prev = s;
      s += t;
    }
    tail_sum = 0.5 * (s + s_prev);
    tail_err = 0.5 * std::abs(s - s_prev) + last;
  }

  out.value = value + tail_sum;
  out.est_error = tail_err;
  return out;
}

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                         double z) {
  if (trials <= 0) return {0.0, 1.0};
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points with weights");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  double det = sw * sxx - sx * sx;
  LineFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  fit.slope_stderr = std::sqrt(sw / det);
  return fit;
}

}  // namespace levyspec::num
