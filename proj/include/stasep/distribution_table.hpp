#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stasep::table {

enum class Provenance { Fredholm, Painleve, Empirical };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Fredholm: return "fredholm";
    case Provenance::Painleve: return "painleve";
    case Provenance::Empirical: return "empirical";
  }
  return "?";
}

// Tabulated CDF on a real grid; density column optional (empty when absent).
struct DistributionTable {
  std::vector<double> grid;
  std::vector<double> cdf;
  std::vector<double> density;
  Provenance provenance = Provenance::Fredholm;
  std::vector<std::pair<std::string, double>> params;

  bool has_density() const { return !density.empty(); }
};

// Monotone grid, cdf within [0,1] and nondecreasing (to tolerance), tails
// near 0/1 for default-width grids, density consistent with cdf increments.
inline void validate(const DistributionTable& t, double mono_tol = 1e-6, double tail_tol = 1e-4,
                     double density_tol = 1e-4, bool check_tails = true) {
  const std::size_t n = t.grid.size();
  if (n < 2 || t.cdf.size() != n) throw std::runtime_error("DistributionTable: malformed columns");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(t.grid[i + 1] > t.grid[i])) throw std::runtime_error("DistributionTable: grid not increasing");
  for (std::size_t i = 0; i < n; ++i)
    if (!(t.cdf[i] >= -mono_tol && t.cdf[i] <= 1.0 + mono_tol))
      throw std::runtime_error("DistributionTable: cdf outside [0,1] at s = " + std::to_string(t.grid[i]));
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (t.cdf[i + 1] < t.cdf[i] - mono_tol)
      throw std::runtime_error("DistributionTable: cdf decreases at s = " + std::to_string(t.grid[i + 1]));
  if (check_tails) {
    if (t.cdf.front() > tail_tol)
      throw std::runtime_error("DistributionTable: left tail " + std::to_string(t.cdf.front()));
    if (t.cdf.back() < 1.0 - tail_tol)
      throw std::runtime_error("DistributionTable: right tail " + std::to_string(t.cdf.back()));
  }
  if (t.has_density()) {
    if (t.density.size() != n) throw std::runtime_error("DistributionTable: density size mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double inc = t.cdf[i + 1] - t.cdf[i];
      const double trap = 0.5 * (t.density[i] + t.density[i + 1]) * (t.grid[i + 1] - t.grid[i]);
      if (std::fabs(inc - trap) > density_tol)
        throw std::runtime_error("DistributionTable: density inconsistent with cdf near s = " +
                                 std::to_string(t.grid[i]));
    }
  }
}

// Raw k-th moment from the cdf increments (midpoint rule across cells).
inline double moment(const DistributionTable& t, int k) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
    const double sm = 0.5 * (t.grid[i] + t.grid[i + 1]);
    m += std::pow(sm, k) * (t.cdf[i + 1] - t.cdf[i]);
  }
  return m;
}

inline double mean(const DistributionTable& t) { return moment(t, 1); }

inline double variance(const DistributionTable& t) {
  const double m = mean(t);
  return moment(t, 2) - m * m;
}

// sup_i |F(grid_i) - G(grid_i)| where G is sampled through a callable.
template <typename F>
double ks_distance(const DistributionTable& t, F&& other_cdf) {
  double d = 0.0;
  for (std::size_t i = 0; i < t.grid.size(); ++i)
    d = std::fmax(d, std::fabs(t.cdf[i] - other_cdf(t.grid[i])));
  return d;
}

// Linear interpolation of the cdf, clamped to the end values.
inline double cdf_at(const DistributionTable& t, double s) {
  if (s <= t.grid.front()) return t.cdf.front();
  if (s >= t.grid.back()) return t.cdf.back();
  std::size_t lo = 0, hi = t.grid.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (t.grid[mid] <= s ? lo : hi) = mid;
  }
  const double f = (s - t.grid[lo]) / (t.grid[lo + 1] - t.grid[lo]);
  return t.cdf[lo] + f * (t.cdf[lo + 1] - t.cdf[lo]);
}

}  // namespace stasep::table
