#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stasep/linalg.hpp"
#include "stasep/quadrature.hpp"

namespace stasep::fredholm {

struct KernelFunction {
  std::function<double(double, double)> evaluate;
  bool symmetric = false;
  double decay_scale = 4.0;
};

// Nystrom discretization of an integral operator on [u, inf):
// matrix_{ij} = sqrt(w_i) K(x_i, x_j) sqrt(w_j).
struct DiscretizedOperator {
  quad::QuadratureRule rule;
  linalg::Matrix matrix;
  double left_endpoint = 0.0;
  std::vector<double> sqrt_w;

  int order() const { return rule.order; }
};

inline DiscretizedOperator discretize_on(const KernelFunction& kernel, quad::QuadratureRule rule) {
  DiscretizedOperator op;
  const int order = rule.order;
  op.rule = std::move(rule);
  op.left_endpoint = op.rule.left_endpoint;
  op.sqrt_w.resize(order);
  for (int i = 0; i < order; ++i) op.sqrt_w[i] = std::sqrt(op.rule.weights[i]);
  op.matrix = linalg::Matrix(order, order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const double v = kernel.evaluate(op.rule.nodes[i], op.rule.nodes[j]);
      if (!std::isfinite(v))
        throw std::runtime_error("discretize: non-finite kernel value at (x,y) = (" +
                                 std::to_string(op.rule.nodes[i]) + ", " +
                                 std::to_string(op.rule.nodes[j]) + ")");
      op.matrix(i, j) = op.sqrt_w[i] * v * op.sqrt_w[j];
    }
  }
  return op;
}

inline DiscretizedOperator discretize(const KernelFunction& kernel, double u, int order,
                                      double decay_scale_override = 0.0) {
  const double L = decay_scale_override > 0.0 ? decay_scale_override : kernel.decay_scale;
  DiscretizedOperator op;
  op.rule = quad::half_line_rule(u, L, order);
  op.left_endpoint = u;
  op.sqrt_w.resize(order);
  for (int i = 0; i < order; ++i) op.sqrt_w[i] = std::sqrt(op.rule.weights[i]);
  op.matrix = linalg::Matrix(order, order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      const double v = kernel.evaluate(op.rule.nodes[i], op.rule.nodes[j]);
      if (!std::isfinite(v))
        throw std::runtime_error("discretize: non-finite kernel value at (x,y) = (" +
                                 std::to_string(op.rule.nodes[i]) + ", " +
                                 std::to_string(op.rule.nodes[j]) + ")");
      op.matrix(i, j) = op.sqrt_w[i] * v * op.sqrt_w[j];
    }
  }
  return op;
}

// det(1 - P_u K P_u) by pivoted LU of (I - matrix).
inline double determinant(const DiscretizedOperator& op) {
  const int n = op.order();
  linalg::Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - op.matrix(i, j);
  return linalg::lu_det(linalg::lu_factor(std::move(a)));
}

// Solves the Nystrom system so that sum_i w_i f(x_i) v_i approximates
// <f, (1-K)^{-1} g>; rhs holds g sampled at the nodes.
inline std::vector<double> resolvent_solve(const DiscretizedOperator& op, const std::vector<double>& rhs) {
  const int n = op.order();
  if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("resolvent_solve: size mismatch");
  linalg::Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - op.matrix(i, j);
  auto f = linalg::lu_factor(std::move(a));
  if (f.singular)
    throw std::runtime_error("resolvent_solve: singular system, det = 0");
  std::vector<double> y(n);
  double ynorm = 0.0;
  for (int i = 0; i < n; ++i) {
    y[i] = op.sqrt_w[i] * rhs[i];
    ynorm = std::fmax(ynorm, std::fabs(y[i]));
  }
  std::vector<double> z = linalg::lu_solve(f, std::move(y));
  // Effective-singularity test by solution blowup: det(1-K) legitimately
  // underflows for these trace-class operators while the solve stays sane,
  // so det alone cannot be the gate.
  double znorm = 0.0;
  for (int i = 0; i < n; ++i) znorm = std::fmax(znorm, std::fabs(z[i]));
  if (znorm > 1e10 * (ynorm + 1e-300))
    throw std::runtime_error("resolvent_solve: singular system, det = " +
                             std::to_string(linalg::lu_det(f)));
  for (int i = 0; i < n; ++i) z[i] /= op.sqrt_w[i];
  return z;
}

enum class BilinearMode { Plain, ApplyKernel, Resolvent };

// <f, g>, <f, K g>, or <f, (1-K)^{-1} g> over [u, inf) in the operator's rule.
inline double bilinear(const DiscretizedOperator& op, const std::function<double(double)>& f,
                       const std::function<double(double)>& g,
                       BilinearMode mode = BilinearMode::Plain) {
  const int n = op.order();
  std::vector<double> fv(n), gv(n);
  for (int i = 0; i < n; ++i) {
    fv[i] = f(op.rule.nodes[i]);
    gv[i] = g(op.rule.nodes[i]);
    if (!std::isfinite(fv[i]) || !std::isfinite(gv[i]))
      throw std::runtime_error("bilinear: non-finite sample at node x = " +
                               std::to_string(op.rule.nodes[i]));
  }
  switch (mode) {
    case BilinearMode::Plain: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += op.rule.weights[i] * fv[i] * gv[i];
      return s;
    }
    case BilinearMode::ApplyKernel: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += op.matrix(i, j) * op.sqrt_w[j] * gv[j];
        s += op.sqrt_w[i] * fv[i] * row;
      }
      return s;
    }
    case BilinearMode::Resolvent: {
      std::vector<double> v = resolvent_solve(op, gv);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += op.rule.weights[i] * fv[i] * v[i];
      return s;
    }
  }
  throw std::logic_error("bilinear: unknown mode");
}

// Applies the discretized kernel to samples: (K h)(x_i) ~ sum_j w_j K(x_i,x_j) h_j.
inline std::vector<double> apply_kernel(const DiscretizedOperator& op, const std::vector<double>& h) {
  const int n = op.order();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += op.matrix(i, j) * op.sqrt_w[j] * h[j];
    out[i] = s / op.sqrt_w[i];
  }
  return out;
}

// Diagnostic for the ||P_u K P_u|| < 1 guardrail.
inline double spectral_radius(const DiscretizedOperator& op) {
  return linalg::spectral_radius_estimate(op.matrix);
}

}  // namespace stasep::fredholm
