#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stasep/quadrature.hpp"

namespace stasep::airy {

struct AiryPair {
  double ai;
  double aip;
};

namespace detail {

inline constexpr double kAi0 = 0.35502805388781723926006318600418317640;
inline constexpr double kAip0 = -0.25881940379280679840518356018920396348;
inline constexpr double kInvTwoSqrtPi = 0.28209479177387814347403972578039;  // 1/(2 sqrt(pi))

// Maclaurin series; safe up to |x| ~ 3 before cancellation costs digits.
inline AiryPair series(double x) {
  if (x == 0.0) return {kAi0, kAip0};
  const double x3 = x * x * x;
  // f = sum a_k x^{3k},    a_k = a_{k-1} /((3k)(3k-1))        * x^3
  // g = sum b_k x^{3k+1},  b_k = b_{k-1} /((3k+1)(3k))        * x^3
  // f'= sum c_k x^{3k-1},  c_1 = x^2/2, c_k = c_{k-1}/((3k-1)(3k-3)) * x^3
  // g'= sum d_k x^{3k},    d_k = d_{k-1}/((3k)(3k-2))         * x^3
  double a = 1.0, f = 1.0;
  double b = x, g = x;
  double c = 0.5 * x * x, fp = c;
  double d = 1.0, gp = 1.0;
  for (int k = 1; k < 80; ++k) {
    a *= x3 / ((3.0 * k) * (3.0 * k - 1.0));
    b *= x3 / ((3.0 * k + 1.0) * (3.0 * k));
    d *= x3 / ((3.0 * k) * (3.0 * k - 2.0));
    f += a;
    g += b;
    gp += d;
    if (k >= 2) {
      c *= x3 / ((3.0 * k - 1.0) * (3.0 * k - 3.0));
      fp += c;
    }
    if (std::fabs(a) < 1e-20 * std::fabs(f) && std::fabs(b) < 1e-20 * (std::fabs(g) + 1e-30)) break;
  }
  const double c1 = kAi0, c2 = -kAip0;
  return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

// Large-x expansion, usable for x >= 14 (smallest term ~ e^{-2 zeta} < 1e-30).
inline AiryPair asymptotic(double x) {
  const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
  double u = 1.0, sa = 1.0, sap = 1.0;
  for (int k = 1; k <= 40; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0));
    const double t = u / std::pow(zeta, k);
    const double sgn = (k % 2) ? -1.0 : 1.0;
    sa += sgn * t;
    sap += sgn * t * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
    if (t < 1e-19) break;
  }
  const double e = std::exp(-zeta);
  const double x14 = std::pow(x, 0.25);
  return {kInvTwoSqrtPi * e / x14 * sa, -kInvTwoSqrtPi * e * x14 * sap};
}

// One Taylor step of y'' = x y from x0 to x0+h, given (y,y') at x0.
inline void taylor_advance(double x0, double h, double& y, double& yp) {
  constexpr int kOrder = 38;
  std::array<double, kOrder + 1> c{};
  c[0] = y;
  c[1] = yp;
  for (int k = 0; k + 2 <= kOrder; ++k) {
    const double prev = (k >= 1) ? c[k - 1] : 0.0;
    c[k + 2] = (x0 * c[k] + prev) / ((k + 1.0) * (k + 2.0));
  }
  double s = 0.0, sp = 0.0;
  for (int k = kOrder; k >= 1; --k) {
    s = s * h + c[k];
    sp = sp * h + k * c[k];
  }
  s = s * h + c[0];
  y = s;
  yp = sp;
}

inline AiryPair taylor_from(double x0, const AiryPair& at, double x) {
  double y = at.ai, yp = at.aip;
  taylor_advance(x0, x - x0, y, yp);
  return {y, yp};
}

// Anchor tables: series covers |x| <= 2.2; the decaying branch on [2.2,14]
// is marched downward from the asymptotic seed at 14 (stable direction);
// the oscillatory branch is marched from -2.0 down to -200.5.
struct Tables {
  static constexpr double kStep = 0.25;
  static constexpr double kPosHi = 14.0;
  static constexpr double kNegHi = -2.0;
  static constexpr double kNegLo = -200.5;
  std::vector<AiryPair> pos;  // pos[k] at x = kPosHi - k*kStep, down to 2.0
  std::vector<AiryPair> neg;  // neg[k] at x = kNegHi - k*kStep

  Tables() {
    {
      AiryPair v = asymptotic(kPosHi);
      double x = kPosHi;
      pos.push_back(v);
      while (x > 2.0 + 1e-9) {
        taylor_advance(x, -kStep, v.ai, v.aip);
        x -= kStep;
        pos.push_back(v);
      }
    }
    {
      AiryPair v = series(kNegHi);
      double x = kNegHi;
      neg.push_back(v);
      while (x > kNegLo + 1e-9) {
        taylor_advance(x, -kStep, v.ai, v.aip);
        x -= kStep;
        neg.push_back(v);
      }
    }
  }
};

inline const Tables& tables() {
  static const Tables t;
  return t;
}

inline AiryPair eval(double x) {
  if (!(x == x)) throw std::invalid_argument("airy: NaN argument");
  if (x >= 14.0) return asymptotic(x);
  if (x >= 2.2) {
    const Tables& t = tables();
    long k = std::lround((Tables::kPosHi - x) / Tables::kStep);
    if (k < 0) k = 0;
    if (k >= static_cast<long>(t.pos.size())) k = static_cast<long>(t.pos.size()) - 1;
    return taylor_from(Tables::kPosHi - k * Tables::kStep, t.pos[k], x);
  }
  if (x > -2.2) return series(x);
  if (x >= -200.0) {
    const Tables& t = tables();
    long k = std::lround((Tables::kNegHi - x) / Tables::kStep);
    if (k < 0) k = 0;
    if (k >= static_cast<long>(t.neg.size())) k = static_cast<long>(t.neg.size()) - 1;
    return taylor_from(Tables::kNegHi - k * Tables::kStep, t.neg[k], x);
  }
  throw std::invalid_argument("airy: argument below supported range");
}

}  // namespace detail

// Wide-range evaluation used by the kernel machinery; arguments far in the
// right tail underflow to exact zero.
inline AiryPair ai_all(double x) { return detail::eval(x); }

inline double airy_ai(double x) {
  if (!(x >= -20.0 && x <= 200.0)) throw std::invalid_argument("airy_ai: x outside [-20, 200]");
  return detail::eval(x).ai;
}

inline double airy_ai_prime(double x) {
  if (!(x >= -20.0 && x <= 200.0)) throw std::invalid_argument("airy_ai_prime: x outside [-20, 200]");
  return detail::eval(x).aip;
}

// Numerical value of Int e^{w y} Ai(beta + y) dy over the real line.
// Meant as an independent check of the closed form e^{w^3/3 - beta w}.
inline double airy_identity_check(double w, double beta) {
  if (!(w >= 0.0)) throw std::invalid_argument("airy_identity_check: w must be >= 0");
  const double lo = -80.0 - beta;  // integration variable y; Ai argument beta+y in [-80, ...]
  const double hi = 40.0 + std::fmax(0.0, 12.0 * w - beta);
  auto f = [&](double y) { return std::exp(w * y) * ai_all(beta + y).ai; };
  double val = quad::integrate_panels(lo, hi, 0.5, 24, f);
  // Tail below lo, by repeated integration by parts of Ai = Ai''/u.
  const double a = beta + lo;
  const AiryPair p = ai_all(a);
  const double tail = p.aip / a + p.ai / (a * a) + 2.0 * p.aip / std::pow(a, 4) + 8.0 * p.ai / std::pow(a, 5);
  val += std::exp(w * lo) * tail;
  return val;
}

}  // namespace stasep::airy
