#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace stasep::stats {

struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n = 0;
};

inline MeanErr mean_stderr(const std::vector<double>& xs) {
  MeanErr r;
  r.n = static_cast<long>(xs.size());
  if (r.n == 0) return r;
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / r.n;
  double v = 0.0;
  for (double x : xs) v += (x - r.mean) * (x - r.mean);
  r.stderr_ = (r.n > 1) ? std::sqrt(v / (r.n - 1.0) / r.n) : 0.0;
  return r;
}

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    s += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::fmax(0.0, std::fmin(1.0, s));
}

// One-sample KS against a callable CDF; sample is sorted in place.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

inline KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::fmax(d, std::fabs((i + 1.0) / n - F));
    d = std::fmax(d, std::fabs(F - i / n));
  }
  KsResult r;
  r.statistic = d;
  const double en = std::sqrt(n);
  r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  return r;
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::fmin(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::fmax(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  KsResult r;
  r.statistic = d;
  const double en = std::sqrt(static_cast<double>(a.size()) * b.size() / (a.size() + b.size()));
  r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  return r;
}

}  // namespace stasep::stats
