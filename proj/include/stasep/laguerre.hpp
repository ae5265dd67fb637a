#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stasep::laguerre {

// Value held as m * 2^e with |m| in [1,2) (or zero); keeps the three-term
// recurrence alive where doubles would over/underflow.
struct Scaled {
  double m = 0.0;
  long e = 0;

  static Scaled from(double v) {
    if (v == 0.0) return {0.0, 0};
    int ex;
    double mm = std::frexp(v, &ex);
    return {mm, ex};
  }
  double value() const { return std::ldexp(m, static_cast<int>(e)); }
  double log_abs() const { return m == 0.0 ? -INFINITY : std::log(std::fabs(m)) + e * 0.6931471805599453; }
  int sign() const { return (m > 0.0) - (m < 0.0); }
};

// L_n^{(alpha)}(x), scaled. Upward recurrence
// (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}. The scaled form
// supports the large edge-scaling runs; the plain-value wrapper keeps the
// tighter public range.
inline Scaled poly_scaled(int n, int alpha, double x) {
  if (n < 0 || n > 6000 || alpha < 0 || alpha > 6000)
    throw std::invalid_argument("laguerre: n, alpha must lie in [0, 6000]");
  if (!(x >= 0.0)) throw std::invalid_argument("laguerre: x must be >= 0");
  if (n == 0) return Scaled::from(1.0);
  double p0 = 1.0, p1 = 1.0 + alpha - x;
  long e = 0;
  for (int k = 1; k < n; ++k) {
    double p2 = ((2.0 * k + 1.0 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    double a = std::fmax(std::fabs(p0), std::fabs(p1));
    if (a > 1e280) {
      p0 = std::ldexp(p0, -1024);
      p1 = std::ldexp(p1, -1024);
      e += 1024;
    } else if (a < 1e-280 && a > 0.0) {
      p0 = std::ldexp(p0, 1024);
      p1 = std::ldexp(p1, 1024);
      e -= 1024;
    }
  }
  Scaled s = Scaled::from(p1);
  s.e += e;
  return s;
}

inline double poly(int n, int alpha, double x) {
  if (n > 2000 || alpha > 2000)
    throw std::invalid_argument("laguerre: n, alpha must lie in [0, 2000]");
  Scaled s = poly_scaled(n, alpha, x);
  double v = s.value();
  if (!std::isfinite(v))
    throw std::overflow_error("laguerre: L_n^{(alpha)}(x) overflows double; log|L| = " +
                              std::to_string(s.log_abs()));
  return v;
}

// Orthonormal Laguerre functions phi_j(x) = sqrt(j!/(j+alpha)!) L_j^{(alpha)}(x)
// x^{alpha/2} e^{-x/2}, j = 0..count-1. Uniformly bounded, so the recurrence
// only needs exponent tracking to survive the deep-forbidden region.
inline void normalized_functions(int count, int alpha, double x, double* out) {
  if (count <= 0) return;
  if (!(x >= 0.0)) throw std::invalid_argument("laguerre: x must be >= 0");
  // log phi_0 = (alpha/2) ln x - x/2 - lgamma(alpha+1)/2
  double lg = 0.5 * alpha * ((x > 0.0) ? std::log(x) : 0.0) - 0.5 * x - 0.5 * std::lgamma(alpha + 1.0);
  if (alpha > 0 && x == 0.0) lg = -INFINITY;
  long e = std::lround(lg / 0.6931471805599453);
  double p0 = (lg == -INFINITY) ? 0.0 : std::exp(lg - e * 0.6931471805599453);
  auto emit = [&](int j, double v) {
    out[j] = (e >= -1000 && e <= 1000) ? std::ldexp(v, static_cast<int>(e)) : (e < 0 ? 0.0 : INFINITY);
  };
  emit(0, p0);
  if (count == 1) return;
  double p1 = (1.0 + alpha - x) / std::sqrt(1.0 + alpha) * p0;
  emit(1, p1);
  for (int j = 1; j + 1 < count; ++j) {
    const double c1 = (2.0 * j + 1.0 + alpha - x) / std::sqrt((j + 1.0) * (j + 1.0 + alpha));
    const double c2 = std::sqrt(j * (j + alpha) / ((j + 1.0) * (j + 1.0 + alpha)));
    double p2 = c1 * p1 - c2 * p0;
    p0 = p1;
    p1 = p2;
    double a = std::fmax(std::fabs(p0), std::fabs(p1));
    if (a > 1e140) {
      p0 = std::ldexp(p0, -512);
      p1 = std::ldexp(p1, -512);
      e += 512;
    } else if (a < 1e-140 && a > 0.0) {
      p0 = std::ldexp(p0, 512);
      p1 = std::ldexp(p1, 512);
      e -= 512;
    }
    emit(j + 1, p1);
  }
}

inline std::vector<double> normalized_functions(int count, int alpha, double x) {
  std::vector<double> out(count);
  normalized_functions(count, alpha, x, out.data());
  return out;
}

// Projection kernel onto the first n Laguerre functions of order alpha:
// K_n^{(alpha)}(x,y) = sum_{j<n} phi_j(x) phi_j(y).
inline double projection_kernel(int n, int alpha, double x, double y) {
  std::vector<double> fx = normalized_functions(n, alpha, x);
  std::vector<double> fy = normalized_functions(n, alpha, y);
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += fx[j] * fy[j];
  return s;
}

}  // namespace stasep::laguerre
