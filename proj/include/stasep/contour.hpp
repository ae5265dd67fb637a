#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include "stasep/quadrature.hpp"

namespace stasep::contour {

using cplx = std::complex<double>;

enum class PathKind { Circle, VerticalLine, Wedge };

// Circle: |z - center| = radius, anti-clockwise when anticlockwise is set.
// VerticalLine: center + i t, t in [-extent, extent], upward.
// Wedge: rays center + t e^{+-i half_angle}, t in [0, extent], traversed from
// the e^{-i half_angle} ray toward the e^{+i half_angle} ray.
struct ContourPath {
  PathKind kind = PathKind::Circle;
  cplx center{0.0, 0.0};
  double radius = 1.0;      // circle radius, or ray/line extent
  double half_angle = M_PI / 3.0;
  bool anticlockwise = true;

  static ContourPath circle(cplx center, double radius, bool anticlockwise = true) {
    if (!(radius > 0.0)) throw std::invalid_argument("ContourPath: radius must be positive");
    return {PathKind::Circle, center, radius, 0.0, anticlockwise};
  }
  static ContourPath vertical_line(double re, double extent) {
    return {PathKind::VerticalLine, {re, 0.0}, extent, 0.0, true};
  }
  static ContourPath wedge(double anchor, double extent, double half_angle = M_PI / 3.0) {
    return {PathKind::Wedge, {anchor, 0.0}, extent, half_angle, true};
  }
};

namespace detail {
inline void check_value(const cplx& v, const cplx& z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::runtime_error("contour_integral: non-finite integrand at node z = (" +
                             std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
}
}  // namespace detail

// Quadrature along the path. Circles use the angle trapezoid rule, which is
// spectrally accurate for integrands analytic in a neighborhood of the path.
inline cplx contour_integral(const std::function<cplx(cplx)>& f, const ContourPath& path, int order) {
  if (order < 16) throw std::invalid_argument("contour_integral: order must be >= 16");
  switch (path.kind) {
    case PathKind::Circle: {
      const int n = order;
      cplx sum{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        const cplx e{std::cos(th), std::sin(th)};
        const cplx z = path.center + path.radius * e;
        const cplx v = f(z);
        detail::check_value(v, z);
        sum += v * e;
      }
      cplx val = sum * cplx(0.0, 1.0) * (2.0 * M_PI * path.radius / n);
      return path.anticlockwise ? val : -val;
    }
    case PathKind::VerticalLine: {
      const auto& ref = quad::gauss_legendre(std::min(order, 512));
      const int panels = std::max(1, order / 24);
      cplx sum{0.0, 0.0};
      const double T = path.radius;
      for (int p = 0; p < panels; ++p) {
        const double a = -T + 2.0 * T * p / panels;
        const double b = -T + 2.0 * T * (p + 1) / panels;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < ref.order; ++i) {
          const double t = c + h * ref.nodes[i];
          const cplx z = path.center + cplx(0.0, t);
          const cplx v = f(z);
          detail::check_value(v, z);
          sum += v * (h * ref.weights[i]);
        }
      }
      return sum * cplx(0.0, 1.0);
    }
    case PathKind::Wedge: {
      const auto& ref = quad::gauss_legendre(std::min(order, 512));
      const int panels = std::max(1, order / 24);
      const cplx ep{std::cos(path.half_angle), std::sin(path.half_angle)};
      const cplx em = std::conj(ep);
      cplx sum{0.0, 0.0};
      const double T = path.radius;
      for (int p = 0; p < panels; ++p) {
        const double a = T * p / panels, b = T * (p + 1) / panels;
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < ref.order; ++i) {
          const double t = c + h * ref.nodes[i];
          const cplx zu = path.center + t * ep;
          const cplx zl = path.center + t * em;
          const cplx vu = f(zu), vl = f(zl);
          detail::check_value(vu, zu);
          detail::check_value(vl, zl);
          sum += (vu * ep - vl * em) * (h * ref.weights[i]);
        }
      }
      return sum;
    }
  }
  throw std::logic_error("contour_integral: unknown path kind");
}

}  // namespace stasep::contour
