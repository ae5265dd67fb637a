#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace stasep::quad {

enum class Domain { Reference, HalfLine };

// Gauss-Legendre rule. On the reference interval [-1,1] it integrates
// polynomials up to degree 2*order-1 exactly; the half-line variant carries
// the rational map x = u + L*(1+xi)/(1-xi) applied to nodes and weights.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
  Domain domain = Domain::Reference;
  double left_endpoint = -1.0;  // u for HalfLine
  double decay_scale = 0.0;     // L for HalfLine
};

namespace detail {

inline void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) { p = 1.0; dp = 0.0; return; }
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

inline QuadratureRule make_gauss_legendre(int order) {
  QuadratureRule r;
  r.order = order;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double p, dp;
    for (int it = 0; it < 60; ++it) {
      legendre_eval(order, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    legendre_eval(order, x, p, dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

}  // namespace detail

inline const QuadratureRule& gauss_legendre(int order) {
  if (order < 2 || order > 512) throw std::invalid_argument("gauss_legendre: order out of range [2,512]");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, detail::make_gauss_legendre(order)).first;
  return it->second;
}

// Nodes/weights for Int_u^inf f(x) dx via x = u + L*(1+xi)/(1-xi),
// dx = 2L/(1-xi)^2 dxi. Concentrates roughly half the nodes in [u, u+L].
inline QuadratureRule half_line_rule(double u, double decay_scale, int order) {
  if (!(decay_scale > 0.0)) throw std::invalid_argument("half_line_rule: decay scale must be positive");
  const QuadratureRule& ref = gauss_legendre(order);
  QuadratureRule r;
  r.order = order;
  r.domain = Domain::HalfLine;
  r.left_endpoint = u;
  r.decay_scale = decay_scale;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    const double xi = ref.nodes[i];
    r.nodes[i] = u + decay_scale * (1.0 + xi) / (1.0 - xi);
    r.weights[i] = ref.weights[i] * 2.0 * decay_scale / ((1.0 - xi) * (1.0 - xi));
  }
  return r;
}

// Gauss-Legendre nodes mapped linearly onto [u, u+span]; for kernels whose
// support past u ends superexponentially this beats the rational map.
inline QuadratureRule truncated_rule(double u, double span, int order) {
  if (!(span > 0.0)) throw std::invalid_argument("truncated_rule: span must be positive");
  const QuadratureRule& ref = gauss_legendre(order);
  QuadratureRule r;
  r.order = order;
  r.domain = Domain::HalfLine;
  r.left_endpoint = u;
  r.decay_scale = span;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = u + 0.5 * span * (1.0 + ref.nodes[i]);
    r.weights[i] = 0.5 * span * ref.weights[i];
  }
  return r;
}

inline double integrate(const QuadratureRule& r, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

inline double integrate_segment(double a, double b, int order, const std::function<double(double)>& f) {
  const QuadratureRule& ref = gauss_legendre(order);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < ref.order; ++i) s += ref.weights[i] * f(c + h * ref.nodes[i]);
  return s * h;
}

inline double integrate_halfline(double u, double decay_scale, int order,
                                 const std::function<double(double)>& f) {
  return integrate(half_line_rule(u, decay_scale, order), f);
}

// Panel sweep for oscillatory integrands on [a,b].
inline double integrate_panels(double a, double b, double panel_width, int order,
                               const std::function<double(double)>& f) {
  if (!(panel_width > 0.0)) throw std::invalid_argument("integrate_panels: bad panel width");
  double s = 0.0;
  double x = a;
  while (x < b) {
    double x2 = std::fmin(x + panel_width, b);
    s += integrate_segment(x, x2, order, f);
    x = x2;
  }
  return s;
}

}  // namespace stasep::quad
