#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stasep::linalg {

// Small dense row-major matrix. Sized for Nystrom systems (order <= 512),
// so no blocking or pivination tricks beyond partial pivoting.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// In-place LU factorization with partial pivoting. Returns the permutation
// sign; piv[i] is the row swapped into position i.
struct LuFactors {
  Matrix lu;
  std::vector<std::size_t> piv;
  int sign = 1;
  bool singular = false;
};

inline LuFactors lu_factor(Matrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("lu_factor: matrix not square");
  LuFactors f{std::move(a), std::vector<std::size_t>(n), 1, false};
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::fabs(m(i, k));
      if (v > best) { best = v; p = i; }
    }
    f.piv[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      f.sign = -f.sign;
    }
    if (m(k, k) == 0.0) { f.singular = true; continue; }
    const double inv = 1.0 / m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = m(i, k) * inv;
      m(i, k) = l;
      if (l != 0.0)
        for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

inline double lu_det(const LuFactors& f) {
  if (f.singular) return 0.0;
  double d = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
  return d;
}

inline std::vector<double> lu_solve(const LuFactors& f, std::vector<double> b) {
  const std::size_t n = f.lu.rows();
  if (b.size() != n) throw std::invalid_argument("lu_solve: size mismatch");
  if (f.singular) throw std::runtime_error("lu_solve: singular system");
  for (std::size_t k = 0; k < n; ++k) {
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    for (std::size_t i = k + 1; i < n; ++i) b[i] -= f.lu(i, k) * b[k];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= f.lu(i, j) * b[j];
    b[i] /= f.lu(i, i);
  }
  return b;
}

// Largest |eigenvalue| estimate by power iteration; diagnostic use only.
inline double spectral_radius_estimate(const Matrix& a, int iters = 80) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  std::vector<double> v(n, 1.0), w(n);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      w[i] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lambda = norm;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return lambda;
}

}  // namespace stasep::linalg
