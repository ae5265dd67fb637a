#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stasep/airy.hpp"
#include "stasep/distribution_table.hpp"
#include "stasep/fredholm.hpp"
#include "stasep/laguerre.hpp"
#include "stasep/linalg.hpp"
#include "stasep/quadrature.hpp"

namespace stasep::ensemble {

using cplx = std::complex<double>;

// Finite-size parameters: tau = 2m+1, j = 2d, boundary rates 1/2+a (first
// row) and 1/2+b (first column); stationary specialization a = 1/2-rho,
// b = -a.
struct EnsembleParams {
  int m = 1;
  int d = 0;
  double a = 0.0;
  double b = 0.0;
  double rho = 0.5;  // only the contour representation and the stationary map use it

  void check() const {
    if (!(std::abs(d) < m)) throw std::invalid_argument("EnsembleParams: need |d| < m");
    if (!(std::fabs(a) < 0.5 && std::fabs(b) < 0.5))
      throw std::invalid_argument("EnsembleParams: a, b must lie in (-1/2, 1/2)");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("EnsembleParams: rho in (0,1)");
  }
};

struct LogValue {
  double lg = 0.0;  // log |value|
  double sgn = 1.0;
  double value() const { return sgn * std::exp(lg); }
};

// Z(a) = (1/2+a)^{m+d} / (1/2-a)^{m-d}
inline LogValue z_factor(double a, int m, int d) {
  if (!(std::fabs(a) < 0.5)) throw std::invalid_argument("z_factor: |a| must be < 1/2");
  LogValue z;
  z.lg = (m + d) * std::log(0.5 + a) - (m - d) * std::log(0.5 - a);
  z.sgn = 1.0;
  return z;
}

// (a+b) Z_{a,b} = ((1-2a)(1-2b)/((1+2a)(1+2b)))^m ((1-4b^2)/(1-4a^2))^d,
// the combination that stays analytic through a+b = 0.
inline LogValue z_ab_times_apb(double a, double b, int m, int d) {
  if (!(std::fabs(a) < 0.5 && std::fabs(b) < 0.5))
    throw std::invalid_argument("z_ab: a, b must lie in (-1/2, 1/2)");
  LogValue v;
  v.lg = m * (std::log1p(-2 * a) + std::log1p(-2 * b) - std::log1p(2 * a) - std::log1p(2 * b)) +
         d * (std::log1p(-4 * b * b) - std::log1p(-4 * a * a));
  v.sgn = 1.0;
  return v;
}

inline LogValue z_ab(double a, double b, int m, int d) {
  if (a + b == 0.0) throw std::invalid_argument("z_ab: a+b = 0; use the continued G_0 route");
  LogValue v = z_ab_times_apb(a, b, m, d);
  v.lg -= std::log(std::fabs(a + b));
  v.sgn = (a + b > 0.0) ? 1.0 : -1.0;
  return v;
}

// ---------------------------------------------------------------------------
// L and R convolution factors: L(x,z) = g_ell(x-z), R(z,y) = g_r(y-z), with
// n = m-d-1, alpha = 2d (d >= 0):
//   g_ell(x) = (-1)^{n+1} (n!/(n+alpha)!) e^{-x/2}
//              [ -x^alpha L_n^{(alpha+1)}(x) + alpha x^{alpha-1} L_n^{(alpha)}(x) ]
//   g_r(x)   = (-1)^n e^{-x/2} L_n^{(alpha+1)}(x)
// ---------------------------------------------------------------------------

namespace detail {

inline double combine_scaled(laguerre::Scaled s, double extra_log, double prefactor_sign) {
  if (s.m == 0.0) return 0.0;
  const double lg = s.log_abs() + extra_log;
  if (lg > 700.0)
    throw std::overflow_error("laguerre_ensemble: factor overflows despite log handling; log = " +
                              std::to_string(lg));
  return prefactor_sign * s.sign() * std::exp(lg);
}

}  // namespace detail

// extra_log is folded into the single exponential so products like
// g_ell(x+v) e^{c v} cannot produce inf * 0.
inline double g_ell(int m, int d, double x, double extra_log = 0.0) {
  if (d < 0) throw std::invalid_argument("g_ell: requires d >= 0");
  const int n = m - d - 1, alpha = 2 * d;
  if (n < 0) throw std::invalid_argument("g_ell: need m > d");
  const double sgn = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
  const double logpre = std::lgamma(n + 1.0) - std::lgamma(n + alpha + 1.0) - 0.5 * x + extra_log;
  if (alpha == 0) {
    laguerre::Scaled A = laguerre::poly_scaled(n, 1, x);
    return detail::combine_scaled(A, logpre, -sgn);
  }
  laguerre::Scaled A = laguerre::poly_scaled(n, alpha + 1, x);
  laguerre::Scaled B = laguerre::poly_scaled(n, alpha, x);
  // -x^alpha A + alpha x^{alpha-1} B, aligned on a shared power-of-two scale
  long e = std::max(A.e, B.e);
  const double av = std::ldexp(A.m, static_cast<int>(A.e - e));
  const double bv = std::ldexp(B.m, static_cast<int>(B.e - e));
  const double combo = -x * av + alpha * bv;  // common factor x^{alpha-1}
  if (combo == 0.0) return 0.0;
  const double lg = logpre + (alpha - 1) * std::log(x) + std::log(std::fabs(combo)) + e * 0.6931471805599453;
  if (lg > 700.0) throw std::overflow_error("g_ell: overflow; log = " + std::to_string(lg));
  return sgn * ((combo > 0) ? 1.0 : -1.0) * std::exp(lg);
}

inline double g_r(int m, int d, double x, double extra_log = 0.0) {
  if (d < 0) throw std::invalid_argument("g_r: requires d >= 0");
  const int n = m - d - 1, alpha = 2 * d;
  if (n < 0) throw std::invalid_argument("g_r: need m > d");
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
  laguerre::Scaled A = laguerre::poly_scaled(n, alpha + 1, x);
  return detail::combine_scaled(A, -0.5 * x + extra_log, sgn);
}

// ---------------------------------------------------------------------------
// Contour representation: li(z) = I_{m,d}(z)/(-2 pi i) and
// ri(z) = I~_{m,d}(z)/(2 pi i), both real, log-scaled trapezoid sums.
// ---------------------------------------------------------------------------

struct ScaledReal {
  double lg = -INFINITY;
  double sgn = 0.0;
  double value() const { return sgn == 0.0 ? 0.0 : sgn * std::exp(lg); }
};

namespace detail {

inline ScaledReal contour_i(int m, int d, double rho, double z, bool tilde, double radius = 0.0,
                            int order = 0) {
  const double center = tilde ? -rho : 1.0 - rho;
  const double r = (radius > 0.0) ? radius : (tilde ? 0.5 * rho : 0.5 * (1.0 - rho));
  const int n = (order > 0) ? order : 64 + 4 * (m + std::abs(d));
  // log integrand: I:  -zeta z + (m-d) Log(zeta+rho) - (m+d) Log(1-rho-zeta)
  //                I~: +zeta z + (m+d) Log(1-rho-zeta) - (m-d) Log(rho+zeta)
  std::vector<cplx> vals(n);
  double mx = -INFINITY;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * M_PI * k / n;
    const cplx e{std::cos(th), std::sin(th)};
    const cplx zeta = center + r * e;
    cplx lg;
    if (!tilde)
      lg = -zeta * z + static_cast<double>(m - d) * std::log(zeta + rho) -
           static_cast<double>(m + d) * std::log(1.0 - rho - zeta);
    else
      lg = zeta * z + static_cast<double>(m + d) * std::log(1.0 - rho - zeta) -
           static_cast<double>(m - d) * std::log(rho + zeta);
    vals[k] = lg + std::log(e * cplx(0.0, 1.0) * r);  // include dzeta = i r e^{i th} dth
    mx = std::fmax(mx, vals[k].real());
  }
  cplx sum{0.0, 0.0};
  for (int k = 0; k < n; ++k) sum += std::exp(vals[k] - mx);
  sum *= 2.0 * M_PI / n;
  // divide by (-2 pi i) for I, (+2 pi i) for I~
  const cplx divisor = tilde ? cplx(0.0, 2.0 * M_PI) : cplx(0.0, -2.0 * M_PI);
  const cplx out = sum / divisor;
  ScaledReal s;
  if (out == cplx(0.0, 0.0)) return s;
  s.lg = mx + std::log(std::abs(out.real()) + 1e-300);
  s.sgn = (out.real() > 0) ? 1.0 : -1.0;
  return s;
}

}  // namespace detail

inline double i_md_regular(int m, int d, double rho, double z, double radius = 0.0, int order = 0) {
  return detail::contour_i(m, d, rho, z, false, radius, order).value();
}
inline double i_md_tilde_regular(int m, int d, double rho, double z, double radius = 0.0, int order = 0) {
  return detail::contour_i(m, d, rho, z, true, radius, order).value();
}

// ---------------------------------------------------------------------------
// The kernel K_{m,d}: polynomial route K_{m-d}^{(2d)}(x,y) (x/y)^d for d>=0,
// transpose for d<0; contour route through L(x,w) R(w,y).
// ---------------------------------------------------------------------------

enum class KernelMode { Polynomial, Contour };

inline double k_md_point(int m, int d, double x, double y) {
  if (d < 0) return k_md_point(m, -d, y, x);  // K_{m,-d} is the transpose
  const int n = m - d, alpha = 2 * d;
  const double sym = laguerre::projection_kernel(n, alpha, x, y);
  if (d == 0) return sym;
  const double t = d * (std::log(x) - std::log(y));
  if (std::fabs(t) > 600.0)
    throw std::overflow_error("k_md: similarity factor (x/y)^d overflows; d log(x/y) = " +
                              std::to_string(t));
  return sym * std::exp(t);
}

inline double k_md_contour_point(int m, int d, double rho, double x, double y, int vorder = 72) {
  // K(x,y) = e^{(1/2-rho)(x-y)} Int_0^inf li(x+v) ri(y+v) dv
  const int corder = 128 + 8 * (m + std::abs(d));
  auto f = [&](double v) {
    return detail::contour_i(m, d, rho, x + v, false, 0.0, corder).value() *
           detail::contour_i(m, d, rho, y + v, true, 0.0, corder).value();
  };
  return std::exp((0.5 - rho) * (x - y)) * quad::integrate_halfline(0.0, 3.0, vorder, f);
}

inline fredholm::KernelFunction k_md(const EnsembleParams& p, KernelMode mode = KernelMode::Polynomial) {
  p.check();
  fredholm::KernelFunction k;
  k.symmetric = (p.d == 0) && (mode == KernelMode::Polynomial);
  k.decay_scale = 4.0;
  if (mode == KernelMode::Polynomial) {
    const int m = p.m, d = p.d;
    k.evaluate = [m, d](double x, double y) { return k_md_point(m, d, x, y); };
  } else {
    const int m = p.m, d = p.d;
    const double rho = p.rho;
    k.evaluate = [m, d, rho](double x, double y) { return k_md_contour_point(m, d, rho, x, y); };
  }
  return k;
}

// Quadrature rule resolving the kernel's spectral bulk and edge on [u, inf);
// span_extra stretches the window when rank-one boundary terms decay at the
// slower exponential rates 1/2 - |a|, 1/2 - |b|.
inline quad::QuadratureRule laguerre_rule(double u, int m, int d, int order, double span_extra = 0.0) {
  const int dd = std::abs(d);
  const double edge = std::pow(std::sqrt(static_cast<double>(m + dd)) + std::sqrt(static_cast<double>(m - dd)), 2.0);
  const double fluct = 2.0 * std::cbrt(edge) + 2.0;
  const double span = std::fmax(14.0, edge + 5.0 * fluct + 14.0 - u) + span_extra;
  return quad::truncated_rule(u, span, order);
}

inline double boundary_span_extra(double a, double b) {
  return 22.0 / (0.5 - std::fmax(std::fabs(a), std::fabs(b)));
}

namespace detail {

// Nystrom matrix of the rank-(m-|d|) projection part built from one
// normalized-function table per node; sym = true drops the similarity
// factor (determinant-equivalent).
inline fredholm::DiscretizedOperator discretize_k_md(const EnsembleParams& p,
                                                     const quad::QuadratureRule& rule, bool sym) {
  const int dd = std::abs(p.d);
  const int n = p.m - dd, alpha = 2 * dd;
  const int ord = rule.order;
  fredholm::DiscretizedOperator op;
  op.rule = rule;
  op.left_endpoint = rule.left_endpoint;
  op.sqrt_w.resize(ord);
  for (int i = 0; i < ord; ++i) op.sqrt_w[i] = std::sqrt(rule.weights[i]);
  std::vector<std::vector<double>> phi(ord);
  for (int i = 0; i < ord; ++i) phi[i] = laguerre::normalized_functions(n, alpha, rule.nodes[i]);
  op.matrix = linalg::Matrix(ord, ord);
  for (int i = 0; i < ord; ++i) {
    for (int j = 0; j < ord; ++j) {
      double s = 0.0;
      for (int t = 0; t < n; ++t) s += phi[i][t] * phi[j][t];
      if (!sym && p.d != 0) {
        const double lt = p.d * (std::log(rule.nodes[i]) - std::log(rule.nodes[j]));
        if (std::fabs(lt) > 600.0) throw std::overflow_error("discretize_k_md: (x/y)^d overflow");
        s *= std::exp(lt);
      }
      op.matrix(i, j) = op.sqrt_w[i] * s * op.sqrt_w[j];
    }
  }
  return op;
}

}  // namespace detail

// F(u) = det(1 - P_u K_{m,d} P_u); the similarity factor cancels in the
// determinant, so the symmetric projection form is used.
inline double f_u(const EnsembleParams& p, double u, int order = 64) {
  if (!(u > 0.0)) throw std::invalid_argument("f_u: u must be > 0");
  p.check();
  auto op = detail::discretize_k_md(p, laguerre_rule(u, p.m, p.d, order), true);
  return fredholm::determinant(op);
}

// ---------------------------------------------------------------------------
// psi transforms. glint(x,c) = Int_0^inf g_ell(x+v) e^{c v} dv (c < 1/2),
// grint likewise with g_r; both superexponentially convergent.
// ---------------------------------------------------------------------------

namespace detail {

inline double glint(int m, int dabs, double x, double c, int order = 48) {
  const double L = 2.0 / (0.5 - std::fmin(c, 0.45));
  return quad::integrate_halfline(0.0, L, order,
                                  [&](double v) { return g_ell(m, dabs, x + v, c * v); });
}
inline double grint(int m, int dabs, double x, double c, int order = 48) {
  const double L = 2.0 / (0.5 - std::fmin(c, 0.45));
  return quad::integrate_halfline(0.0, L, order,
                                  [&](double v) { return g_r(m, dabs, x + v, c * v); });
}

}  // namespace detail

enum class PsiSide { Left, Right };

// ((1-K) psi_c)(x) for Left; ((1-K)^* psi_c)(x) for Right. Valid for d >= 0;
// d < 0 swaps the sides (transpose kernel).
inline std::function<double(double)> one_minus_k_psi(const EnsembleParams& p, double c, PsiSide side) {
  p.check();
  if (!(std::fabs(c) < 0.5)) throw std::invalid_argument("one_minus_k_psi: |c| < 1/2 required");
  const int m = p.m;
  int d = p.d;
  PsiSide eff = side;
  if (d < 0) {  // K_{m,-d} = K_{m,d}^T
    d = -d;
    eff = (side == PsiSide::Left) ? PsiSide::Right : PsiSide::Left;
  }
  if (eff == PsiSide::Left) {
    const double zmb = z_factor(-c, m, d).value();  // Z(-c)
    return [m, d, c, zmb](double x) { return std::exp(-c * x) - zmb * detail::glint(m, d, x, c); };
  }
  const double zi = 1.0 / z_factor(c, m, d).value();  // Z(c)^{-1}
  return [m, d, c, zi](double x) { return std::exp(-c * x) - zi * detail::grint(m, d, x, c); };
}

// K^{a,b}_{m,d}(x,y) = K_{m,d}(x,y) + Z_{a,b}^{-1} (1-K)psi_b(x) (1-K)^*psi_a(y)
inline fredholm::KernelFunction rank_one_kernel(const EnsembleParams& p) {
  p.check();
  if (!(p.a > 0.0 && p.b > 0.0))
    throw std::invalid_argument("rank_one_kernel: probabilistic regime needs a, b in (0, 1/2)");
  auto gb = one_minus_k_psi(p, p.b, PsiSide::Left);
  auto la = one_minus_k_psi(p, p.a, PsiSide::Right);
  const double zinv = 1.0 / z_ab(p.a, p.b, p.m, p.d).value();
  const int m = p.m, d = p.d;
  fredholm::KernelFunction k;
  k.symmetric = false;
  k.decay_scale = 4.0;
  k.evaluate = [m, d, zinv, gb, la](double x, double y) {
    return k_md_point(m, d, x, y) + zinv * gb(x) * la(y);
  };
  return k;
}

// det(1 - P_u K^{a,b} P_u) on a window wide enough for the rank-one tail.
inline double rank_one_det(const EnsembleParams& p, double u, int order = 96) {
  auto op = fredholm::discretize_on(rank_one_kernel(p),
                                    laguerre_rule(u, p.m, p.d, order, boundary_span_extra(p.a, p.b)));
  return fredholm::determinant(op);
}

// ---------------------------------------------------------------------------
// G^{a,b}(u) and its continuation G_0(u).
// ---------------------------------------------------------------------------

enum class GabMode { Direct, Regularized, RegularizedBis };

namespace detail {

struct GWork {
  fredholm::DiscretizedOperator op;  // full (similarity-carrying) kernel on [u, inf)
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GWork g_work(const EnsembleParams& p, double u, int order) {
  GWork w;
  w.op = discretize_k_md(p, laguerre_rule(u, p.m, p.d, order, boundary_span_extra(p.a, p.b)), false);
  w.nodes = w.op.rule.nodes;
  w.weights = w.op.rule.weights;
  return w;
}

// sum_j w_j K(x_j, x_i) h_j  (adjoint apply at the nodes)
inline std::vector<double> apply_kernel_adjoint(const fredholm::DiscretizedOperator& op,
                                                const std::vector<double>& h) {
  const int n = op.order();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += op.matrix(j, i) * op.sqrt_w[j] * h[j];
    out[i] = s / op.sqrt_w[i];
  }
  return out;
}

}  // namespace detail

// G^{a,b}(u), all three representations. Direct is (5.8) and needs a+b > 0;
// the regularized splits are analytic in (a,b) across a+b = 0.
inline double g_ab_u(const EnsembleParams& p, double u, GabMode mode = GabMode::Regularized,
                     int order = 64) {
  p.check();
  if (!(u > 0.0)) throw std::invalid_argument("g_ab_u: u must be > 0");
  if (p.d < 0) throw std::invalid_argument("g_ab_u: d >= 0 expected (use CP1 to map d < 0)");
  const int m = p.m, d = p.d;
  const double a = p.a, b = p.b;
  detail::GWork W = detail::g_work(p, u, order);
  const int n = W.op.order();

  if (mode == GabMode::Direct) {
    if (!(a + b > 0.0)) throw std::invalid_argument("g_ab_u: direct mode needs a+b > 0");
    auto gb = one_minus_k_psi(p, b, PsiSide::Left);
    auto la = one_minus_k_psi(p, a, PsiSide::Right);
    std::vector<double> gv(n);
    for (int i = 0; i < n; ++i) gv[i] = gb(W.nodes[i]);
    std::vector<double> v = fredholm::resolvent_solve(W.op, gv);
    double inner = 0.0;
    for (int i = 0; i < n; ++i) inner += W.weights[i] * la(W.nodes[i]) * v[i];
    const double zab = z_ab(a, b, m, d).value();
    return (1.0 - inner / zab) / (a + b);
  }

  // shared pieces
  const double za = z_factor(a, m, d).value();    // Z(a)
  const double zmb = z_factor(-b, m, d).value();  // Z(-b)
  const double c = a + b;
  const double logPi = z_ab_times_apb(a, b, m, d).lg;
  // term1 = [Pi - e^{-c u}]/c, analytic at c = 0 with limit
  // u + (2ad - m)/(1/4 - a^2)
  const double term1 = (std::fabs(c) > 1e-14)
                           ? std::exp(-c * u) * std::expm1(logPi + c * u) / c
                           : u + (2.0 * a * d - m) / (0.25 - a * a);
  const double norm = std::exp(logPi);  // (a+b) Z_{a,b}

  if (mode == GabMode::Regularized) {
    // term2 = <psi_a, P_u K psi_b> = Z(-b) Int_u e^{-a x} glint(x, b)
    double term2 = 0.0;
    std::vector<double> gv(n), fa(n);
    for (int i = 0; i < n; ++i) {
      const double x = W.nodes[i];
      term2 += W.weights[i] * std::exp(-a * x) * detail::glint(m, d, x, b);
      gv[i] = std::exp(-b * x) - zmb * detail::glint(m, d, x, b);  // (1-K)psi_b
    }
    term2 *= zmb;
    // f_a = K^* P_u psi_a - Z(a)^{-1} R^* P_- psi_a
    std::vector<double> expa(n);
    for (int i = 0; i < n; ++i) expa[i] = std::exp(-a * W.nodes[i]);
    std::vector<double> kpa = detail::apply_kernel_adjoint(W.op, expa);
    for (int i = 0; i < n; ++i) fa[i] = kpa[i] - detail::grint(m, d, W.nodes[i], a) / za;
    // T3 = <f_a, P_u g_b> + <f_a, P_u X P_u (K P_u g_b)>
    std::vector<double> kg = fredholm::apply_kernel(W.op, gv);
    std::vector<double> v = fredholm::resolvent_solve(W.op, kg);
    double t3 = 0.0;
    for (int i = 0; i < n; ++i) t3 += W.weights[i] * fa[i] * (gv[i] + v[i]);
    return (term1 + term2 - t3) / norm;
  }

  // RegularizedBis
  double term2 = 0.0;
  std::vector<double> h(n), la_v(n), expb(n);
  for (int i = 0; i < n; ++i) {
    const double x = W.nodes[i];
    term2 += W.weights[i] * std::exp(-b * x) * detail::grint(m, d, x, a);
    la_v[i] = std::exp(-a * x) - detail::grint(m, d, x, a) / za;  // (1-K)^* psi_a
    expb[i] = std::exp(-b * x);
  }
  term2 /= za;
  // h = (1-K) Q_u psi_b on [u,inf) = K P_u psi_b - K psi_b
  std::vector<double> kpb = fredholm::apply_kernel(W.op, expb);
  for (int i = 0; i < n; ++i) h[i] = kpb[i] - zmb * detail::glint(m, d, W.nodes[i], b);
  // T3' = <l_a, P_u h> + <K^* P_u l_a, P_u X P_u h>
  std::vector<double> kla = detail::apply_kernel_adjoint(W.op, la_v);
  std::vector<double> v = fredholm::resolvent_solve(W.op, h);
  double t3 = 0.0;
  for (int i = 0; i < n; ++i) t3 += W.weights[i] * (la_v[i] * h[i] + kla[i] * v[i]);
  return (term1 + term2 - t3) / norm;
}

// G_0(u) = lim_{b -> -a} G^{a,b}(u); the (eqGabPos) split for a >= 0, the
// mirrored (eqGabNeg) split otherwise.
inline double g0_u(const EnsembleParams& p_in, double u, int order = 64) {
  EnsembleParams p = p_in;
  p.b = -p.a;
  p.check();
  if (!(u > 0.0)) throw std::invalid_argument("g0_u: u must be > 0");
  GabMode mode = (p.a >= 0.0) ? GabMode::Regularized : GabMode::RegularizedBis;
  return g_ab_u(p, u, mode, order);
}

// ---------------------------------------------------------------------------
// Stationary finite-size CDF: P_0(h_0(2d, 2m+1) <= u) = d/du [F(u) G_0(u)],
// with a = 1/2 - rho, b = -a.
// ---------------------------------------------------------------------------

struct StationaryCdf {
  table::DistributionTable table;
  std::vector<double> fg;  // F(u) G_0(u) at the grid (integrated form)
};

inline StationaryCdf stationary_cdf(double rho, int m, int d, const std::vector<double>& u_grid,
                                    int order = 64) {
  if (u_grid.size() < 2) throw std::invalid_argument("stationary_cdf: need at least two u values");
  for (std::size_t i = 0; i + 1 < u_grid.size(); ++i)
    if (!(u_grid[i + 1] > u_grid[i])) throw std::invalid_argument("stationary_cdf: grid must increase");
  if (!(u_grid.front() > 0.0)) throw std::invalid_argument("stationary_cdf: grid must be positive");
  EnsembleParams p;
  p.m = m;
  p.d = d;
  p.rho = rho;
  p.a = 0.5 - rho;
  p.b = -p.a;
  StationaryCdf out;
  out.table.grid = u_grid;
  out.table.cdf.resize(u_grid.size());
  out.table.provenance = table::Provenance::Fredholm;
  out.table.params = {{"rho", rho}, {"m", static_cast<double>(m)}, {"d", static_cast<double>(d)}};
  out.fg.resize(u_grid.size());
  auto fg = [&](double u) { return f_u(p, u, order) * g0_u(p, u, order); };
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double u = u_grid[i];
    const double h = std::fmin(0.05, u / 100.0);
    double th[5];
    for (int k = -2; k <= 2; ++k) th[k + 2] = fg(u + k * h);
    out.fg[i] = th[2];
    out.table.cdf[i] = (-th[4] + 8 * th[3] - 8 * th[1] + th[0]) / (12 * h);
  }
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (out.table.cdf[i] < -1e-5)
      throw std::runtime_error("stationary_cdf: negative value (under-resolution) at u = " +
                               std::to_string(u_grid[i]));
    if (out.table.cdf[i] < 0.0) out.table.cdf[i] = 0.0;
    if (i > 0 && out.table.cdf[i] < out.table.cdf[i - 1] - 1e-5)
      throw std::runtime_error("stationary_cdf: non-monotone beyond 1e-5 at u = " +
                               std::to_string(u_grid[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge-scaling maps.
// ---------------------------------------------------------------------------

struct ScalingMap {
  double rho = 0.5, w = 0.0, s = 0.0;
  double t = 0.0;  // t-parametrization when t > 0
  long N = 0;      // N-parametrization when N > 0
  int m = 0, d = 0;
  double u = 0.0;
  double alpha = 0.0;  // 2d
  double kappa = 0.0, chi = 0.0;
};

namespace detail {
// floor, then move to the nearest even integer (tau odd / j even parity).
inline long floor_even(double x) {
  long v = static_cast<long>(std::floor(x));
  if (v % 2 != 0) v += 1;  // v odd: v+1 is the even value closest to x in [v, v+1)
  return v;
}
}  // namespace detail

inline ScalingMap scaling_map_t(double rho, double w, double s, double t) {
  if (!(rho > 0.0 && rho < 1.0) || !(t >= 1.0)) throw std::invalid_argument("scaling_map: bad rho or t");
  ScalingMap sm;
  sm.rho = rho;
  sm.w = w;
  sm.s = s;
  sm.t = t;
  sm.chi = rho * (1.0 - rho);
  sm.kappa = 1.0 / (rho * std::cbrt(1.0 - rho));
  const double c13 = std::cbrt(sm.chi), c23 = c13 * c13;
  const double two_m = (1.0 - 2.0 * sm.chi) * t + 2.0 * w * (1.0 - 2.0 * rho) * c13 * std::pow(t, 2.0 / 3.0) -
                       s * c23 * std::cbrt(t);
  const double jj = (1.0 - 2.0 * rho) * t + 2.0 * w * c13 * std::pow(t, 2.0 / 3.0);
  sm.m = static_cast<int>(detail::floor_even(two_m) / 2);
  sm.d = static_cast<int>(detail::floor_even(jj) / 2);
  sm.alpha = 2.0 * sm.d;
  sm.u = std::floor(t + s * std::cbrt(t) / c13);
  if (!(sm.m > std::abs(sm.d)))
    throw std::invalid_argument("scaling_map: derived m <= |d| (outside the admissible wedge)");
  return sm;
}

inline ScalingMap scaling_map_N(double rho, double w, double s, long N) {
  if (!(rho > 0.0 && rho < 1.0) || !(N >= 1)) throw std::invalid_argument("scaling_map: bad rho or N");
  ScalingMap sm;
  sm.rho = rho;
  sm.w = w;
  sm.s = s;
  sm.N = N;
  sm.chi = rho * (1.0 - rho);
  sm.kappa = 1.0 / (rho * std::cbrt(1.0 - rho));
  const double r2 = rho * rho;
  const double omr = 1.0 - rho;
  const double N13 = std::cbrt(static_cast<double>(N)), N23 = N13 * N13;
  const double alpha_raw = (1.0 - 2.0 * rho) / r2 * N + 2.0 * w * std::pow(omr, 4.0 / 3.0) / r2 * N23 +
                           (8.0 / 3.0 * w * w * omr + s * (1.0 - 2.0 * rho)) * std::pow(omr, 2.0 / 3.0) /
                               r2 * N13;
  const long alpha = detail::floor_even(alpha_raw);
  sm.d = static_cast<int>(alpha / 2);
  sm.m = static_cast<int>(N + alpha / 2);
  sm.alpha = static_cast<double>(alpha);
  sm.u = std::floor(N / r2 + 2.0 * w * std::cbrt(omr) / r2 * N23 +
                    (8.0 / 3.0 * w * w + s) * std::pow(omr, 2.0 / 3.0) / r2 * N13);
  if (!(sm.m > std::abs(sm.d)))
    throw std::invalid_argument("scaling_map: derived m <= |d| (outside the admissible wedge)");
  return sm;
}

// ---------------------------------------------------------------------------
// H_N / H~_N diagnostics: contour evaluations against the limiting
// phi_{+-w,s}(y) and the decay envelopes.
// ---------------------------------------------------------------------------

struct HnPoint {
  double y = 0.0;
  double h = 0.0;        // H_N(y)
  double h_tilde = 0.0;  // H~_N(y)
  double phi = 0.0;      // phi_{w,s}(y)
  double phi_m = 0.0;    // phi_{-w,s}(y)
};

struct HnReport {
  ScalingMap map;
  double a = 0.0;  // 1/2 - rho
  std::vector<HnPoint> points;
  double max_err_h = 0.0;        // sup |H_N - phi_{w,s}|
  double max_err_h_tilde = 0.0;  // sup |H~_N - phi_{-w,s}|
  double envelope_sup = 0.0;     // sup over y in [5,20] of |H_N(y)| e^{y^{3/2}/3}
  double route_diff = 0.0;       // |H~ direct - H~ via (rho,w) -> (1-rho,-w)|
};

inline HnReport h_n_diagnostics(double rho, double w, double s, long N,
                                const std::vector<double>& y_grid) {
  auto phi_limit = [](double ww, double ss, double y) {
    const double arg = ww * ww + ss + y;
    return airy::ai_all(arg).ai * std::exp(ww * arg - ww * ww * ww / 3.0);
  };
  if (N < 50) throw std::invalid_argument("h_n_diagnostics: N >= 50 required");
  HnReport rep;
  rep.map = scaling_map_N(rho, w, s, N);
  rep.a = 0.5 - rho;
  const int m = rep.map.m, d = rep.map.d;
  const double kn = rep.map.kappa * std::cbrt(static_cast<double>(N));
  const LogValue za = z_factor(rep.a, m, d);
  for (double y : y_grid) {
    const double z = rep.map.u + y * kn;
    // steep-descent circles through the double critical point at the origin
    ScaledReal li = detail::contour_i(m, d, rho, z, false, 1.0 - rho);
    ScaledReal ri = detail::contour_i(m, d, rho, z, true, rho);
    HnPoint pt;
    pt.y = y;
    pt.h = li.sgn * std::exp(li.lg + za.lg + std::log(kn));
    pt.h_tilde = ri.sgn * std::exp(ri.lg - za.lg + std::log(kn));
    pt.phi = phi_limit(w, s, y);
    pt.phi_m = phi_limit(-w, s, y);
    rep.max_err_h = std::fmax(rep.max_err_h, std::fabs(pt.h - pt.phi));
    rep.max_err_h_tilde = std::fmax(rep.max_err_h_tilde, std::fabs(pt.h_tilde - pt.phi_m));
    rep.points.push_back(pt);
    // mirrored route: I~_{m,d}(z; rho) = -I_{m,-d}(z; 1-rho) exactly, so the
    // /(2 pi i) vs /(-2 pi i) normalizations make ri = +li(m,-d,1-rho)
    ScaledReal mir = detail::contour_i(m, -d, 1.0 - rho, z, false, rho);
    const double ht_mirror = mir.sgn * std::exp(mir.lg - za.lg + std::log(kn));
    rep.route_diff = std::fmax(rep.route_diff, std::fabs(pt.h_tilde - ht_mirror));
  }
  for (double y = 5.0; y <= 20.0 + 1e-9; y += 1.0) {
    const double z = rep.map.u + y * kn;
    ScaledReal li = detail::contour_i(m, d, rho, z, false, 1.0 - rho);
    const double hv = li.sgn * std::exp(li.lg + za.lg + std::log(kn));
    rep.envelope_sup = std::fmax(rep.envelope_sup, std::fabs(hv) * std::exp(std::pow(y, 1.5) / 3.0));
  }
  return rep;
}

}  // namespace stasep::ensemble
