#include "levyspec/partition.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "levyspec/eigensolve.hpp"
#include "levyspec/errors.hpp"
#include "levyspec/numerics.hpp"

namespace levyspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

double log_zn_trace(const KernelOperator& op, int n) {
  if (n < 1) throw Error("zn_trace: n >= 1 required");
  if (n == 1 && !op.mass().in_l1())
    throw NotIntegrable(
        "Tr(R_r) requires an L1 mass; Z_1 is undefined for '" +
        op.mass().name() + "'");
  const auto& mu = op.full_spectrum(2).mu;
  double mu1 = mu[0];
  if (!(mu1 > 0.0)) throw ConvergenceFailure("top eigenvalue not positive");
  // Z_n = mu_1^n * Sum_j sign_j |mu_j / mu_1|^n; the j = 1 term anchors
  // the sum at 1, everything else decays geometrically in n.
  double rel = 0.0;
  for (double m : mu) {
    double q = m / mu1;
    double mag = std::pow(std::abs(q), n);
    rel += (q < 0.0 && (n % 2 == 1)) ? -mag : mag;
  }
  return n * std::log(mu1) + std::log(rel);
}

double zn_trace(const KernelOperator& op, int n) {
  return std::exp(log_zn_trace(op, n));
}

double z2_direct(const LevyModel& model, const MassFunction& mass, double r,
                 const Grid& grid) {
  PotentialDensity pd(model, r);
  const int N = grid.N;
  std::vector<double> vlag(N), wm(N);
  for (int k = 0; k < N; ++k) vlag[k] = pd.value(k * grid.h);
  for (int i = 0; i < N; ++i) wm[i] = grid.w(i) * mass(grid.x(i));
  // Sum over lags: Z2 = sum_l (2 - [l=0]) v_l^2 sum_i wm_i wm_{i+l}
  double total = 0.0;
  for (int lag = 0; lag < N; ++lag) {
    double s = 0.0;
    for (int i = 0; i + lag < N; ++i) s += wm[i] * wm[i + lag];
    total += (lag == 0 ? 1.0 : 2.0) * vlag[lag] * vlag[lag] * s;
  }
  return total;
}

double zhat2_dual(const LevyModel& model, const MassFunction& mass, double r) {
  if (!mass.in_l1())
    throw NotIntegrable("Fourier dual needs an L1 mass ('" + mass.name() +
                        "')");
  auto g = [&model, r](double z) { return 1.0 / (r - model.char_exponent(z)); };
  auto law = model.small_y_power_law();
  double zscale = std::pow(r / law.c, 1.0 / law.alpha);

  // rho(u) = \int g(z) g(z-u) dz; peaks at z = 0 and z = u.
  auto rho = [&](double u) {
    auto f = [&](double z) { return g(z) * g(z - u); };
    double Z = std::max(4.0 * std::abs(u), 64.0) + 1e4 * zscale;
    double a = -Z;
    // panel knots geometric around both peaks
    double total = 0.0;
    auto span = [&](double lo, double hi, double center) {
      auto shifted = [&](double t) { return f(t); };
      // integrate [lo,hi] with geometric refinement toward `center`
      double scale = std::max(zscale, 1e-8);
      total += num::gl_geometric(shifted, center, hi, scale);
      auto mirrored = [&](double t) { return f(2.0 * center - t); };
      total += num::gl_geometric(mirrored, center, 2.0 * center - lo, scale);
    };
    if (std::abs(u) < 4.0 * zscale) {
      span(a, Z, 0.5 * u);
    } else {
      double mid = 0.5 * u;
      if (u > 0.0) {
        span(a, mid, 0.0);
        span(mid, Z, u);
      } else {
        span(a, mid, u);
        span(mid, Z, 0.0);
      }
    }
    return total;
  };

  // u-integral of |m_hat(u)|^2 rho(u) / (2pi)^2, u symmetric.
  auto fu = [&](double u) {
    double mh = mass.fourier(u);
    return mh * mh * rho(u);
  };
  double mh_tail_exp = 2.0 * std::max(1.5, mass.tail_exponent());
  double U = 4.0;
  double value = num::gl_geometric(fu, 0.0, U, 0.25, 12);
  for (int block = 0; block < 40; ++block) {
    double nxt = num::gl_geometric(fu, U, 2.0 * U, 0.5 * U, 12);
    value += nxt;
    U *= 2.0;
    if (std::abs(nxt) < 1e-7 * std::abs(value)) break;
    (void)mh_tail_exp;
  }
  return 2.0 * value / (4.0 * kPi * kPi);
}

double log_zn_free(const KernelOperator& op, int n) {
  if (n < 2) throw Error("zn_free: n >= 2 required");
  const int N = op.grid().N;
  // Z^f_n = u^T S^{n-1} u with u_i = sqrt(w_i m_i); rescale each product
  // to dodge overflow and accumulate the log.
  std::vector<double> cur = op.u(), nxt(N);
  double logscale = 0.0;
  for (int step = 0; step < n - 1; ++step) {
    op.matvec(cur.data(), nxt.data());
    double peak = 0.0;
    for (double t : nxt) peak = std::max(peak, std::abs(t));
    if (!(peak > 0.0)) throw ConvergenceFailure("zn_free: chain vanished");
    for (double& t : nxt) t /= peak;
    logscale += std::log(peak);
    std::swap(cur, nxt);
  }
  double dot = 0.0;
  for (int i = 0; i < N; ++i) dot += op.u()[i] * cur[i];
  return logscale + std::log(dot);
}

double zn_free(const KernelOperator& op, int n) {
  return std::exp(log_zn_free(op, n));
}

ZetaMoments zeta_moments(const KernelOperator& op, double x, int n_max) {
  if (n_max < 1) throw Error("zeta_moments: n_max >= 1 required");
  const auto& grid = op.grid();
  const auto& u = op.u();
  const auto& vlag = op.vlag();
  const int N = grid.N;
  int ix = grid.index_of(x);

  ZetaMoments out;
  out.moments.resize(n_max);
  out.hadamard.resize(n_max);

  // start vector rho_i = u_i v(x_i - x); chain Ztilde_n = u^T S^{n-1} rho
  std::vector<double> cur(N), nxt(N);
  for (int i = 0; i < N; ++i) cur[i] = u[i] * vlag[std::abs(i - ix)];

  double log_nfact = 0.0;
  double logscale = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    log_nfact += std::log(static_cast<double>(n));
    double dot = 0.0;
    for (int i = 0; i < N; ++i) dot += u[i] * cur[i];
    double log_zt = logscale + std::log(dot);
    out.moments[n - 1] = std::exp(log_nfact + log_zt);
    out.hadamard[n - 1] = std::exp(log_zt / n);
    if (n < n_max) {
      op.matvec(cur.data(), nxt.data());
      double peak = 0.0;
      for (double t : nxt) peak = std::max(peak, std::abs(t));
      for (double& t : nxt) t /= peak;
      logscale += std::log(peak);
      std::swap(cur, nxt);
    }
  }

  // First moment again by plain quadrature of \int v(y - x) m(y) dy.
  const auto& m = op.mass_values();
  double direct = 0.0;
  for (int i = 0; i < N; ++i)
    direct += grid.w(i) * vlag[std::abs(i - ix)] * m[i];
  out.first_moment_direct = direct;
  return out;
}

EigenBounds eigen_bounds(const KernelOperator& op, double lambda1) {
  double norm1 = op.mass().l1_norm();  // throws NotIntegrable if absent
  double v0 = op.v0();
  double z2 = z2_direct(op.model(), op.mass(), op.kill_rate(), op.grid());
  EigenBounds b;
  b.lower = 1.0 / (norm1 * v0);
  b.upper = norm1 * v0 / z2;
  b.lambda1 = lambda1;
  b.pass = b.lower <= lambda1 && lambda1 <= b.upper;
  return b;
}

SmallRRow small_r_point(const LevyModel& model, const MassFunction& mass,
                        double r) {
  auto law = model.small_y_power_law();
  // v^r widens like r^{-1/alpha}; scale the domain with it and keep the
  // step fine enough for the mass. Node counts stay odd.
  double L = std::max(default_halfwidth(mass), 8.0 * std::pow(r, -1.0 / law.alpha));
  double target_h = L > 400.0 ? 0.25 : 0.1;
  int N = 2 * static_cast<int>(std::ceil(L / target_h)) + 1;
  if (N > 32001) N = 32001;
  Grid grid(L, N);

  KernelOperator op(model, mass, r, grid);
  auto mv = [&op](const double* x, double* y) { op.matvec(x, y); };
  auto top = eig::lanczos_top(mv, grid.N, 1);

  SmallRRow row;
  row.r = r;
  row.gamma = 1.0 / top.values[0];
  // regular-variation prediction for the decay rate
  double I = (kPi / law.alpha) / std::sin(kPi / law.alpha);
  row.prediction = (1.0 / mass.l1_norm()) * std::pow(law.c, 1.0 / law.alpha) *
                   kPi / I * std::pow(r, (law.alpha - 1.0) / law.alpha);
  row.ratio = row.gamma / row.prediction;
  row.grid_L = L;
  row.grid_N = grid.N;
  return row;
}

SmallRStudy small_r_study(const LevyModel& model, const MassFunction& mass,
                          const std::vector<double>& r_list) {
  SmallRStudy study;
  std::vector<std::future<SmallRRow>> jobs;
  jobs.reserve(r_list.size());
  for (double r : r_list)
    jobs.push_back(std::async(std::launch::async, [&model, &mass, r] {
      return small_r_point(model, mass, r);
    }));
  for (auto& j : jobs) study.rows.push_back(j.get());

  std::vector<double> lx, ly, lw;
  for (const auto& row : study.rows) {
    lx.push_back(std::log(row.r));
    ly.push_back(std::log(row.gamma));
    lw.push_back(1.0);
  }
  if (lx.size() >= 2) study.fitted_exponent = num::fit_line(lx, ly, lw).slope;
  return study;
}

}  // namespace levyspec
