#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stasep/airy.hpp"
#include "stasep/quadrature.hpp"

namespace stasep::painleve {

namespace detail {

// Piecewise cubic Hermite on a uniform grid, with exact integrals of the
// interpolant. Accurate to O(h^4) given values and derivatives.
struct HermiteSeries {
  double s0 = 0.0, h = 1.0;
  std::vector<double> v, d;

  int locate(double s) const {
    int i = static_cast<int>(std::floor((s - s0) / h));
    if (i < 0) i = 0;
    if (i > static_cast<int>(v.size()) - 2) i = static_cast<int>(v.size()) - 2;
    return i;
  }
  double eval(double s) const {
    const int i = locate(s);
    const double t = (s - (s0 + i * h)) / h;
    const double t2 = t * t, t3 = t2 * t;
    return v[i] * (2 * t3 - 3 * t2 + 1) + d[i] * h * (t3 - 2 * t2 + t) + v[i + 1] * (-2 * t3 + 3 * t2) +
           d[i + 1] * h * (t3 - t2);
  }
  double eval_deriv(double s) const {
    const int i = locate(s);
    const double t = (s - (s0 + i * h)) / h;
    const double t2 = t * t;
    return (v[i] * (6 * t2 - 6 * t) + d[i] * h * (3 * t2 - 4 * t + 1) + v[i + 1] * (6 * t - 6 * t2) +
            d[i + 1] * h * (3 * t2 - 2 * t)) /
           h;
  }
  double cell_integral(int i, double t) const {  // Int over [x_i, x_i + t h]
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    return h * (v[i] * (0.5 * t4 - t3 + t) + d[i] * h * (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) +
                v[i + 1] * (-0.5 * t4 + t3) + d[i + 1] * h * (0.25 * t4 - t3 / 3.0));
  }
};

// Int_s^{end} of a Hermite series, any s in range.
struct RightCumulative {
  HermiteSeries f;
  std::vector<double> tail;  // tail[i] = Int_{x_i}^{x_end}

  void build() {
    const int n = static_cast<int>(f.v.size());
    tail.assign(n, 0.0);
    for (int i = n - 2; i >= 0; --i) tail[i] = tail[i + 1] + f.cell_integral(i, 1.0);
  }
  double from(double s) const {
    const int i = f.locate(s);
    const double t = (s - (f.s0 + i * f.h)) / f.h;
    return tail[i] - f.cell_integral(i, t);
  }
};

inline std::vector<double> fd_derivative(const std::vector<double>& v, double h) {
  const int n = static_cast<int>(v.size());
  std::vector<double> d(n);
  for (int i = 2; i < n - 2; ++i)
    d[i] = (-v[i + 2] + 8 * v[i + 1] - 8 * v[i - 1] + v[i - 2]) / (12 * h);
  auto one_sided = [&](int i, int dir) {
    return dir * (-25 * v[i] + 48 * v[i + dir] - 36 * v[i + 2 * dir] + 16 * v[i + 3 * dir] -
                  3 * v[i + 4 * dir]) /
           (12 * h);
  };
  d[0] = one_sided(0, 1);
  d[1] = one_sided(1, 1);
  d[n - 1] = one_sided(n - 1, -1);
  d[n - 2] = one_sided(n - 2, -1);
  return d;
}

}  // namespace detail

// Hastings-McLeod solution of q'' = 2 q^3 + s q with q ~ -Ai at +inf,
// q ~ -sqrt(-s/2) at -inf, q < 0 throughout.
struct PainleveSolution {
  double s_min = 0.0, s_max = 0.0, h = 0.0;
  std::vector<double> s_grid;
  std::vector<double> q_values;
  std::vector<double> q_prime;
  detail::HermiteSeries q_spline;
  detail::RightCumulative cum_q;    // Int_s^{s_max} q
  detail::RightCumulative cum_q2;   // Int_s^{s_max} q^2
  detail::RightCumulative cum_xq2;  // Int_s^{s_max} x q(x)^2
  double tail_q = 0.0;              // Int_{s_max}^inf q   (from q ~ -Ai)
  double tail_q2 = 0.0;             // Int_{s_max}^inf q^2
  double tail_xq2 = 0.0;            // Int_{s_max}^inf x q(x)^2

  double q_at(double s) const { return q_spline.eval(s); }
  double qp_at(double s) const { return q_spline.eval_deriv(s); }
  double int_q_to_inf(double s) const { return cum_q.from(s) + tail_q; }

  void require_range(double s) const {
    if (s < s_min - 1e-12 || s > s_max + 1e-12)
      throw std::invalid_argument("painleve: s outside solution range");
  }
};

inline PainleveSolution hastings_mcleod(double s_min = -12.0, double s_max = 10.0, double tol = 1e-11,
                                        double step = 0.005) {
  if (s_min < -12.0 || s_max > 10.0 || s_max <= s_min)
    throw std::invalid_argument("hastings_mcleod: range must lie in [-12, 10]");
  if (tol < 1e-12) throw std::invalid_argument("hastings_mcleod: tol below 1e-12 not supported");

  const double h = step;
  const int n = static_cast<int>(std::llround((s_max - s_min) / h)) + 1;
  PainleveSolution sol;
  sol.s_min = s_min;
  sol.s_max = s_min + (n - 1) * h;
  sol.h = h;
  sol.s_grid.resize(n);
  for (int i = 0; i < n; ++i) sol.s_grid[i] = s_min + i * h;

  // Shooting pass from the right with the -Ai seed builds the initial
  // profile; it loses the separatrix around s ~ -4, where we clamp to the
  // left asymptotics. The Numerov-Newton sweep below does the real work.
  std::vector<double> q(n);
  {
    double y = -airy::ai_all(sol.s_max).ai;
    double yp = -airy::ai_all(sol.s_max).aip;
    const int sub = 8;
    const double hs = -h / sub;
    double s = sol.s_max;
    q[n - 1] = y;
    for (int i = n - 2; i >= 0; --i) {
      for (int k = 0; k < sub; ++k) {
        auto f = [](double ss, double qq, double qqp, double& dq, double& dqp) {
          dq = qqp;
          dqp = 2.0 * qq * qq * qq + ss * qq;
        };
        double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
        f(s, y, yp, k1q, k1p);
        f(s + hs / 2, y + hs / 2 * k1q, yp + hs / 2 * k1p, k2q, k2p);
        f(s + hs / 2, y + hs / 2 * k2q, yp + hs / 2 * k2p, k3q, k3p);
        f(s + hs, y + hs * k3q, yp + hs * k3p, k4q, k4p);
        y += hs / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
        yp += hs / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        s += hs;
      }
      const double si = sol.s_grid[i];
      const double asym = (si < 0.0) ? -std::sqrt(-si / 2.0) : -0.2;
      if (!(std::fabs(y) < 5.0) || (si < -3.0 && std::fabs(y - asym) > 0.5)) {
        y = asym;
        yp = (si < -0.5) ? 0.25 * std::sqrt(2.0 / -si) : 0.0;
      }
      q[i] = y;
    }
  }

  // Boundary values: right from q ~ -Ai, left from the three-term expansion
  // q(s) = -sqrt(-s/2) (1 + 1/(8 s^3) - 73/(128 s^6) + ...).
  const double qR = -airy::ai_all(sol.s_max).ai;
  const double sL = sol.s_min;
  const double qL = -std::sqrt(-sL / 2.0) *
                    (1.0 + 1.0 / (8.0 * sL * sL * sL) - 73.0 / (128.0 * std::pow(sL, 6.0)));
  q[0] = qL;
  q[n - 1] = qR;

  // Numerov discretization of q'' = g(s,q), g = 2q^3 + s q:
  // q_{i+1} - 2 q_i + q_{i-1} = (h^2/12)(g_{i+1} + 10 g_i + g_{i-1}).
  auto g = [&](int i, double qi) { return 2.0 * qi * qi * qi + sol.s_grid[i] * qi; };
  auto gp = [&](int i, double qi) { return 6.0 * qi * qi + sol.s_grid[i]; };
  const double h2 = h * h;
  std::vector<double> F(n), dl(n), dm(n), du(n), rhs(n);
  double resid = 0.0;
  bool converged = false;
  for (int iter = 0; iter < 60; ++iter) {
    resid = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      F[i] = q[i + 1] - 2 * q[i] + q[i - 1] -
             (h2 / 12.0) * (g(i + 1, q[i + 1]) + 10.0 * g(i, q[i]) + g(i - 1, q[i - 1]));
      resid = std::fmax(resid, std::fabs(F[i]));
    }
    if (resid < 1e-14 * (1.0 + h2)) { converged = true; break; }
    for (int i = 1; i + 1 < n; ++i) {
      dl[i] = 1.0 - (h2 / 12.0) * gp(i - 1, q[i - 1]);
      dm[i] = -2.0 - (10.0 * h2 / 12.0) * gp(i, q[i]);
      du[i] = 1.0 - (h2 / 12.0) * gp(i + 1, q[i + 1]);
      rhs[i] = -F[i];
    }
    // Thomas solve on interior unknowns 1..n-2 (boundaries fixed).
    for (int i = 2; i + 1 < n; ++i) {
      const double m = dl[i] / dm[i - 1];
      dm[i] -= m * du[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> delta(n, 0.0);
    delta[n - 2] = rhs[n - 2] / dm[n - 2];
    for (int i = n - 3; i >= 1; --i) delta[i] = (rhs[i] - du[i] * delta[i + 1]) / dm[i];
    double mx = 0.0;
    for (int i = 1; i + 1 < n; ++i) mx = std::fmax(mx, std::fabs(delta[i]));
    const double lambda = (mx > 0.5) ? 0.5 / mx : 1.0;  // damped step
    for (int i = 1; i + 1 < n; ++i) q[i] += lambda * delta[i];
  }
  if (!converged)
    throw std::runtime_error("hastings_mcleod: Newton sweep failed, residual = " + std::to_string(resid));
  for (int i = 0; i < n; ++i)
    if (!(q[i] < 0.0))
      throw std::runtime_error("hastings_mcleod: sign condition q(s) < 0 violated at s = " +
                               std::to_string(sol.s_grid[i]));

  sol.q_values = q;
  sol.q_prime = detail::fd_derivative(q, h);
  sol.q_spline = {sol.s_min, h, sol.q_values, sol.q_prime};

  // Cumulatives of q, q^2, x q^2 with right-end asymptotic tails from -Ai.
  auto make_cum = [&](auto fn) {
    detail::RightCumulative c;
    c.f.s0 = sol.s_min;
    c.f.h = h;
    c.f.v.resize(n);
    for (int i = 0; i < n; ++i) c.f.v[i] = fn(i);
    c.f.d = detail::fd_derivative(c.f.v, h);
    c.build();
    return c;
  };
  sol.cum_q = make_cum([&](int i) { return q[i]; });
  sol.cum_q2 = make_cum([&](int i) { return q[i] * q[i]; });
  sol.cum_xq2 = make_cum([&](int i) { return sol.s_grid[i] * q[i] * q[i]; });
  sol.tail_q = -quad::integrate_halfline(sol.s_max, 1.0, 64, [](double x) { return airy::ai_all(x).ai; });
  sol.tail_q2 = quad::integrate_halfline(sol.s_max, 1.0, 64, [](double x) {
    const double a = airy::ai_all(x).ai;
    return a * a;
  });
  sol.tail_xq2 = quad::integrate_halfline(sol.s_max, 1.0, 64, [](double x) {
    const double a = airy::ai_all(x).ai;
    return x * a * a;
  });
  return sol;
}

// Tracy-Widom GUE via the Painleve representation:
// F_GUE(s) = exp(-Int_s^inf (x-s) q(x)^2 dx).
inline double f_gue_painleve(const PainleveSolution& sol, double s) {
  sol.require_range(s);
  const double integral = sol.cum_xq2.from(s) + sol.tail_xq2 - s * (sol.cum_q2.from(s) + sol.tail_q2);
  return std::exp(-integral);
}

struct BRState {
  double a = 0.0;
  double b = 0.0;
};

namespace detail {

// Integrates the w-direction system (fixed s)
//   a' = q^2 a - (q' + w q) b
//   b' = (q' - w q) a + (w^2 - s - q^2) b
// from the w=0 data a = -b = exp(Int_s^inf q).
inline BRState br_integrate_w(const PainleveSolution& sol, double s, double w_target) {
  const double q = sol.q_at(s);
  const double qp = sol.qp_at(s);
  const double a0 = std::exp(sol.int_q_to_inf(s));
  double a = a0, b = -a0;
  const double W = std::fabs(w_target);
  if (W == 0.0) return {a, b};
  const double sgn = (w_target > 0.0) ? 1.0 : -1.0;
  const int steps = std::max(64, static_cast<int>(std::ceil(W * 512.0)));
  const double hw = sgn * W / steps;
  auto rhs = [&](double w, double av, double bv, double& da, double& db) {
    da = q * q * av - (qp + w * q) * bv;
    db = (qp - w * q) * av + (w * w - s - q * q) * bv;
  };
  double w = 0.0;
  for (int k = 0; k < steps; ++k) {
    double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(w, a, b, k1a, k1b);
    rhs(w + hw / 2, a + hw / 2 * k1a, b + hw / 2 * k1b, k2a, k2b);
    rhs(w + hw / 2, a + hw / 2 * k2a, b + hw / 2 * k2b, k3a, k3b);
    rhs(w + hw, a + hw * k3a, b + hw * k3b, k4a, k4b);
    a += hw / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
    b += hw / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
    w += hw;
  }
  return {a, b};
}

}  // namespace detail

inline BRState br_functions(const PainleveSolution& sol, double s, double w) {
  sol.require_range(s);
  if (std::fabs(w) > 2.0) throw std::invalid_argument("br_functions: |w| must be <= 2");
  return detail::br_integrate_w(sol, s, w);
}

// Baik-Rains scaling function g_BR(s,w) = Int_{-inf}^s a(x,w) a(x,-w) dx.
// The integrand decays like exp(-(2 sqrt2/3)|x|^{3/2}) on the left; the
// truncation at the solution's left end is estimated and checked.
inline double g_br(const PainleveSolution& sol, double s, double w, double tol = 1e-7) {
  sol.require_range(s);
  auto integrand = [&](double x) {
    const BRState p = detail::br_integrate_w(sol, x, w);
    const BRState m = detail::br_integrate_w(sol, x, -w);
    return p.a * m.a;
  };
  const double lo = sol.s_min;
  const double val = quad::integrate_panels(lo, s, 0.5, 16, integrand);
  // a(x,w)a(x,-w) decays like e^{2 q(lo) (x - lo)} to the left of lo
  const double edge = integrand(lo);
  const double rate = -2.0 * sol.q_at(lo);
  const double tail = edge / rate;
  if (std::fabs(tail) > tol)
    throw std::runtime_error("g_br: left-truncation tail estimate " + std::to_string(tail) +
                             " exceeds tolerance");
  return val + tail;
}

// Mean and variance of the ODE-route distribution
// F_w(s) = d/ds [ F_GUE(s+w^2) g_BR(s+w^2, w) ].
inline std::pair<double, double> f0_moments(const PainleveSolution& sol, double w) {
  if (std::fabs(w) > 1.5) throw std::invalid_argument("f0_moments: |w| must be <= 1.5");
  const double lo = -8.0, hi = 6.0, hs = 0.02;
  const int n = static_cast<int>(std::llround((hi - lo) / hs)) + 1;
  // cumulative product Theta(s) = F_GUE(s+w^2) g_BR(s+w^2, w) on the grid
  std::vector<double> theta(n);
  double run = 0.0;  // g_BR cumulative from s_min
  auto integrand = [&](double x) {
    const BRState p = detail::br_integrate_w(sol, x, w);
    const BRState m = detail::br_integrate_w(sol, x, -w);
    return p.a * m.a;
  };
  run = quad::integrate_panels(sol.s_min, lo + w * w, 0.5, 16, integrand);
  double prev = lo + w * w;
  for (int i = 0; i < n; ++i) {
    const double sshift = lo + i * hs + w * w;
    if (i > 0) {
      run += quad::integrate_segment(prev, sshift, 8, integrand);
      prev = sshift;
    }
    theta[i] = f_gue_painleve(sol, sshift) * run;
  }
  // density = Theta'' is not needed; moments come from the CDF F = Theta'.
  std::vector<double> cdf = detail::fd_derivative(theta, hs);
  // E[X] = Int s dF = Int s F'(s) ds by the density; integrate by the
  // trapezoid of s dF across cells.
  double mean = 0.0, second = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double sm = lo + (i + 0.5) * hs;
    const double dF = cdf[i + 1] - cdf[i];
    mean += sm * dF;
    second += sm * sm * dF;
  }
  return {mean, second - mean * mean};
}

}  // namespace stasep::painleve
