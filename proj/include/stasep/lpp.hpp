#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stasep/laguerre_ensemble.hpp"
#include "stasep/parallel.hpp"
#include "stasep/rng.hpp"
#include "stasep/stats.hpp"
#include "stasep/tasep.hpp"

namespace stasep::lpp {

// Directed last-passage percolation with boundary sources. Weight indices
// (i,j), i = 0..m (columns), j = 0..n (rows); first-row weights w(i,0) carry
// the a-rate, first-column weights w(0,j) the b-rate.
enum class WeightModel {
  StationaryZeta,           // boundary exponentials of means (1-rho)^{-1}, rho^{-1}, w(0,0)=0,
                            // plus geometric zeta_+/zeta_- zeroing the leading boundary cells
  AbExponential,            // rates 1/2+a, 1/2+b, corner a+b, interior 1
  AbExponentialZeroCorner,  // as above with w(0,0) = 0
  Geometric,                // interior q, boundaries alpha sqrt(q), beta sqrt(q), corner alpha beta
};

struct LppConfig {
  int cols = 1, rows = 1;  // m, n
  WeightModel model = WeightModel::AbExponentialZeroCorner;
  double rho = 0.5;
  double a = 0.25, b = 0.25;
  double q = 0.5, alpha = 0.8, beta = 0.8;
  std::uint64_t master_seed = 1;
  long replicas = 1;

  void validate() const {
    if (cols < 0 || rows < 0) throw std::invalid_argument("LppConfig: negative grid");
    switch (model) {
      case WeightModel::StationaryZeta:
        if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("LppConfig: rho in (0,1)");
        break;
      case WeightModel::AbExponential:
        if (!(a + b > 0.0)) throw std::invalid_argument("LppConfig: corner rate a+b must be positive");
        [[fallthrough]];
      case WeightModel::AbExponentialZeroCorner:
        if (!(a > -0.5 && a < 0.5 && b > -0.5 && b < 0.5) || !(0.5 + a > 0.0) || !(0.5 + b > 0.0))
          throw std::invalid_argument("LppConfig: boundary rates must be positive");
        break;
      case WeightModel::Geometric:
        if (!(q > 0.0 && q < 1.0 && alpha * beta < 1.0 && alpha * std::sqrt(q) < 1.0 &&
              beta * std::sqrt(q) < 1.0 && alpha > 0.0 && beta > 0.0))
          throw std::invalid_argument("LppConfig: geometric parameters out of range");
        break;
    }
  }
};

struct WeightDraw {
  int m = 0, n = 0;
  std::vector<double> w;  // (m+1) x (n+1)
  long zeta_plus = 0, zeta_minus = 0;

  double& at(int i, int j) { return w[static_cast<std::size_t>(i) * (n + 1) + j]; }
  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * (n + 1) + j]; }
};

namespace detail {
inline double exp_rate(rng::Stream& rs, double rate) { return rs.exponential() / rate; }
// geometric via floor of an exponential: P(X = k) = (1-p) p^k
inline double geom_p(rng::Stream& rs, double p) {
  return std::floor(rs.exponential() / (-std::log(p)));
}
}  // namespace detail

inline WeightDraw sample_weights(const LppConfig& cfg, long replica) {
  cfg.validate();
  rng::Stream rs(cfg.master_seed, static_cast<std::uint64_t>(replica));
  WeightDraw d;
  d.m = cfg.cols;
  d.n = cfg.rows;
  d.w.assign(static_cast<std::size_t>(cfg.cols + 1) * (cfg.rows + 1), 0.0);
  switch (cfg.model) {
    case WeightModel::StationaryZeta: {
      for (int i = 1; i <= d.m; ++i) d.at(i, 0) = detail::exp_rate(rs, 1.0 - cfg.rho);
      for (int j = 1; j <= d.n; ++j) d.at(0, j) = detail::exp_rate(rs, cfg.rho);
      for (int i = 1; i <= d.m; ++i)
        for (int j = 1; j <= d.n; ++j) d.at(i, j) = rs.exponential();
      // zeta_+ ~ rho(1-rho)^k, zeta_- ~ (1-rho) rho^k
      d.zeta_plus = static_cast<long>(detail::geom_p(rs, 1.0 - cfg.rho));
      d.zeta_minus = static_cast<long>(detail::geom_p(rs, cfg.rho));
      for (int i = 1; i <= std::min<long>(d.zeta_plus, d.m); ++i) d.at(i, 0) = 0.0;
      for (int j = 1; j <= std::min<long>(d.zeta_minus, d.n); ++j) d.at(0, j) = 0.0;
      break;
    }
    case WeightModel::AbExponential:
    case WeightModel::AbExponentialZeroCorner: {
      if (cfg.model == WeightModel::AbExponential) d.at(0, 0) = detail::exp_rate(rs, cfg.a + cfg.b);
      for (int i = 1; i <= d.m; ++i) d.at(i, 0) = detail::exp_rate(rs, 0.5 + cfg.a);
      for (int j = 1; j <= d.n; ++j) d.at(0, j) = detail::exp_rate(rs, 0.5 + cfg.b);
      for (int i = 1; i <= d.m; ++i)
        for (int j = 1; j <= d.n; ++j) d.at(i, j) = rs.exponential();
      break;
    }
    case WeightModel::Geometric: {
      const double sq = std::sqrt(cfg.q);
      d.at(0, 0) = detail::geom_p(rs, cfg.alpha * cfg.beta);
      for (int i = 1; i <= d.m; ++i) d.at(i, 0) = detail::geom_p(rs, cfg.alpha * sq);
      for (int j = 1; j <= d.n; ++j) d.at(0, j) = detail::geom_p(rs, cfg.beta * sq);
      for (int i = 1; i <= d.m; ++i)
        for (int j = 1; j <= d.n; ++j) d.at(i, j) = detail::geom_p(rs, cfg.q);
      break;
    }
  }
  return d;
}

// w_zeta of the coupling argument: the first zeta_+ first-row and zeta_-
// first-column cells are zeroed.
inline WeightDraw apply_zeta(const WeightDraw& base, long zeta_plus, long zeta_minus) {
  WeightDraw d = base;
  d.zeta_plus = zeta_plus;
  d.zeta_minus = zeta_minus;
  for (int i = 1; i <= std::min<long>(zeta_plus, d.m); ++i) d.at(i, 0) = 0.0;
  for (int j = 1; j <= std::min<long>(zeta_minus, d.n); ++j) d.at(0, j) = 0.0;
  return d;
}

struct LppGrid {
  int m = 0, n = 0;
  std::vector<double> g;
  double& at(int i, int j) { return g[static_cast<std::size_t>(i) * (n + 1) + j]; }
  double at(int i, int j) const { return g[static_cast<std::size_t>(i) * (n + 1) + j]; }
};

// G(i,j) = max(G(i-1,j), G(i,j-1)) + w(i,j), G(0,0) = w(0,0).
inline LppGrid last_passage(const WeightDraw& d) {
  LppGrid out;
  out.m = d.m;
  out.n = d.n;
  out.g.assign(d.w.size(), 0.0);
  for (int i = 0; i <= d.m; ++i) {
    for (int j = 0; j <= d.n; ++j) {
      double best = 0.0;
      if (i > 0 && j > 0)
        best = std::fmax(out.at(i - 1, j), out.at(i, j - 1));
      else if (i > 0)
        best = out.at(i - 1, j);
      else if (j > 0)
        best = out.at(i, j - 1);
      out.at(i, j) = best + d.at(i, j);
    }
  }
  return out;
}

// h~(j, tau) of the growth picture; 0 outside |j| < tau.
inline std::vector<double> height_from_g(const LppGrid& g, int tau) {
  if (tau < 1) throw std::invalid_argument("height_from_g: tau >= 1");
  std::vector<double> h(2 * tau + 1, 0.0);
  for (int j = -tau + 1; j <= tau - 1; ++j) {
    int ii, jj;
    if (((tau + j) % 2 + 2) % 2 == 1) {  // (-1)^{tau+j} = -1
      ii = (tau - 1 + j) / 2;
      jj = (tau - 1 - j) / 2;
    } else {
      ii = (tau - 2 + j) / 2;
      jj = (tau - 2 - j) / 2;
    }
    if (ii < 0 || jj < 0) continue;  // tau = 1 even-parity corner
    if (ii > g.m || jj > g.n)
      throw std::invalid_argument("height_from_g: grid too small for tau");
    h[j + tau] = g.at(ii, jj);
  }
  return h;
}

// Line ensemble h_ell(j, tau), ell = 0, -1, ...; lines[l] holds ell = -l.
struct LineEnsemble {
  int tau = 0;
  std::vector<std::vector<double>> lines;  // [l][j + tau]
  double at(int ell, int j) const { return lines[static_cast<std::size_t>(-ell)][j + tau]; }
};

// Growth dynamics with RSK copy rule: the top line takes the max update and
// the overlap annihilated in line ell is added to line ell-1.
inline LineEnsemble rsk_lines(const WeightDraw& d, int tau) {
  if (tau < 1 || tau > 25) throw std::invalid_argument("rsk_lines: tau in [1, 25]");
  const int nl = tau / 2 + 2;
  const int width = 2 * tau + 1;
  LineEnsemble ens;
  ens.tau = tau;
  std::vector<std::vector<double>> cur(nl, std::vector<double>(width, 0.0));
  std::vector<std::vector<double>> nxt = cur;
  auto idx = [tau](int j) { return j + tau; };
  for (int t = 0; t < tau; ++t) {
    for (int l = 0; l < nl; ++l) nxt[l] = cur[l];
    for (int j = -t - 1 + 1; j <= t + 1 - 1; ++j) {  // |j| < t+1
      if (((j + t) % 2 + 2) % 2 != 0) continue;      // update where (-1)^{j+t} = 1
      const int ii = (t + j) / 2, jj = (t - j) / 2;
      // top line: deposition with the max rule
      const double up = std::fmax(cur[0][idx(j - 1)], cur[0][idx(j + 1)]);
      nxt[0][idx(j)] = up + d.at(ii, jj);
      // lower lines spread like the top one; the deposited mass is the
      // overlap annihilated one line above
      for (int l = 1; l < nl; ++l) {
        const double mn = std::fmin(cur[l - 1][idx(j - 1)], cur[l - 1][idx(j + 1)]);
        const double mx = std::fmax(cur[l][idx(j - 1)], cur[l][idx(j + 1)]);
        nxt[l][idx(j)] = mx + mn - cur[l - 1][idx(j)];
      }
    }
    std::swap(cur, nxt);
  }
  ens.lines = std::move(cur);
  return ens;
}

inline long positive_point_count(const LineEnsemble& e) {
  long cnt = 0;
  for (const auto& line : e.lines)
    for (double v : line)
      if (v > 0.0) ++cnt;
  return cnt;
}

// sum_{j=0}^{floor((2 tau - 1)/4)} (2 tau - 4j - 1)
inline long expected_point_count(int tau) {
  long s = 0;
  for (long j = 0; j <= (2 * tau - 1) / 4; ++j) s += 2 * tau - 4 * j - 1;
  return s;
}

// ---------------------------------------------------------------------------
// Cross-simulator and bound checks.
// ---------------------------------------------------------------------------

struct CouplingReport {
  std::vector<double> t_grid;
  std::vector<double> lpp_cdf, lpp_se;
  std::vector<double> tasep_cdf, tasep_se;
  double max_gap_sigma = 0.0;  // max |diff| / combined se
  double max_gap = 0.0;
};

// Q(G(m,n) <= t) vs P(m+n <= h_t(m-n)) on a t grid.
inline CouplingReport coupling_check(double rho, int m, int n, long replicas, std::uint64_t seed,
                                     std::vector<double> t_grid = {}) {
  if (m + n > 200) throw std::invalid_argument("coupling_check: m+n too large for the TASEP window");
  if (t_grid.empty()) {
    const double mean = (m + n + 1) * 1.5 / std::fmin(rho, 1.0 - rho);
    for (int i = 1; i <= 12; ++i) t_grid.push_back(mean * i / 8.0);
  }
  CouplingReport rep;
  rep.t_grid = t_grid;
  const std::size_t ng = t_grid.size();

  // LPP side
  {
    LppConfig cfg;
    cfg.cols = m;
    cfg.rows = n;
    cfg.model = WeightModel::StationaryZeta;
    cfg.rho = rho;
    cfg.master_seed = seed;
    cfg.replicas = replicas;
    struct Acc {
      std::vector<long> cnt;
      long n = 0;
    };
    auto chunks = parallel::run_replicas<Acc>(replicas, 1024, [&](long r, Acc& acc) {
      if (acc.cnt.empty()) acc.cnt.assign(ng, 0);
      auto d = sample_weights(cfg, r);
      auto g = last_passage(d);
      const double v = g.at(m, n);
      for (std::size_t i = 0; i < ng; ++i)
        if (v <= t_grid[i]) acc.cnt[i]++;
      acc.n++;
    });
    rep.lpp_cdf.assign(ng, 0.0);
    rep.lpp_se.assign(ng, 0.0);
    long total = 0;
    std::vector<long> cnt(ng, 0);
    for (const auto& a : chunks) {
      if (a.cnt.empty()) continue;
      for (std::size_t i = 0; i < ng; ++i) cnt[i] += a.cnt[i];
      total += a.n;
    }
    for (std::size_t i = 0; i < ng; ++i) {
      const double p = static_cast<double>(cnt[i]) / total;
      rep.lpp_cdf[i] = p;
      rep.lpp_se[i] = std::sqrt(p * (1.0 - p) / total);
    }
  }

  // TASEP side: h_t(m-n) checkpointed along the grid
  {
    const int jsite = m - n;
    const double t_max = t_grid.back();
    tasep::TasepConfig cfg;
    cfg.rho = rho;
    cfg.t_max = t_max;
    cfg.replicas = replicas;
    cfg.master_seed = seed + 0x517cc1b727220a95ull;
    cfg.observation_sites = {jsite};
    cfg.window_halfwidth = cfg.required_halfwidth() + 2;
    struct Acc {
      std::vector<long> cnt;
      long n = 0;
    };
    auto chunks = parallel::run_replicas<Acc>(replicas, 256, [&](long r, Acc& acc) {
      if (acc.cnt.empty()) acc.cnt.assign(ng, 0);
      rng::Stream rs(cfg.master_seed, static_cast<std::uint64_t>(r));
      tasep::detail::Engine e;
      e.init(cfg.window_halfwidth, rho, rs);
      const int base = cfg.window_halfwidth + 1;
      std::int64_t h = 0;
      if (jsite >= 1)
        for (int i = 1; i <= jsite; ++i) h += 1 - 2 * static_cast<std::int64_t>(e.occ[i + base]);
      else if (jsite <= -1)
        for (int i = jsite + 1; i <= 0; ++i) h -= 1 - 2 * static_cast<std::int64_t>(e.occ[i + base]);
      const int bond = jsite + base;
      std::size_t gi = 0;
      long crossings = 0;
      while (!e.empty() && gi < ng) {
        double dt;
        std::uint32_t k;
        rs.exp_and_below(static_cast<std::uint32_t>(e.msize), dt, k);
        const double tn = e.t + dt / static_cast<double>(e.msize);
        while (gi < ng && t_grid[gi] < tn) {
          if (h + 2 * crossings >= m + n) acc.cnt[gi]++;
          gi++;
        }
        if (gi >= ng) break;
        e.t = tn;
        if (e.jump(static_cast<int>(k)) == bond) crossings++;
      }
      while (gi < ng) {  // frozen state past the last event
        if (h + 2 * crossings >= m + n) acc.cnt[gi]++;
        gi++;
      }
      acc.n++;
    });
    rep.tasep_cdf.assign(ng, 0.0);
    rep.tasep_se.assign(ng, 0.0);
    long total = 0;
    std::vector<long> cnt(ng, 0);
    for (const auto& a : chunks) {
      if (a.cnt.empty()) continue;
      for (std::size_t i = 0; i < ng; ++i) cnt[i] += a.cnt[i];
      total += a.n;
    }
    for (std::size_t i = 0; i < ng; ++i) {
      const double p = static_cast<double>(cnt[i]) / total;
      rep.tasep_cdf[i] = p;
      rep.tasep_se[i] = std::sqrt(p * (1.0 - p) / total);
    }
  }

  for (std::size_t i = 0; i < ng; ++i) {
    const double gap = std::fabs(rep.lpp_cdf[i] - rep.tasep_cdf[i]);
    const double se = std::sqrt(rep.lpp_se[i] * rep.lpp_se[i] + rep.tasep_se[i] * rep.tasep_se[i]);
    rep.max_gap = std::fmax(rep.max_gap, gap);
    if (se > 0.0) rep.max_gap_sigma = std::fmax(rep.max_gap_sigma, gap / se);
  }
  return rep;
}

struct ZetaBoundReport {
  long zeta_plus = 0, zeta_minus = 0;
  std::vector<double> u;
  std::vector<double> empirical, se, bound;
  bool monotone_ok = true;  // 0 <= G^0 - G^zeta on every sample
  bool within_bound = true;
};

inline ZetaBoundReport zeta_bound_check(double rho, int m, int n, long zp, long zm,
                                        const std::vector<double>& u_list, long replicas,
                                        std::uint64_t seed) {
  LppConfig cfg;
  cfg.cols = m;
  cfg.rows = n;
  cfg.model = WeightModel::StationaryZeta;
  cfg.rho = rho;
  cfg.master_seed = seed;
  cfg.replicas = replicas;
  ZetaBoundReport rep;
  rep.zeta_plus = zp;
  rep.zeta_minus = zm;
  rep.u = u_list;
  struct Acc {
    std::vector<long> cnt;
    bool mono = true;
    long n = 0;
  };
  auto chunks = parallel::run_replicas<Acc>(replicas, 1024, [&](long r, Acc& acc) {
    if (acc.cnt.empty()) acc.cnt.assign(u_list.size(), 0);
    // unzeroed stationary weights; the conditioning fixes zeta = (zp, zm)
    rng::Stream rs(cfg.master_seed, static_cast<std::uint64_t>(r));
    WeightDraw w0;
    w0.m = m;
    w0.n = n;
    w0.w.assign(static_cast<std::size_t>(m + 1) * (n + 1), 0.0);
    for (int i = 1; i <= m; ++i) w0.at(i, 0) = rs.exponential() / (1.0 - rho);
    for (int j = 1; j <= n; ++j) w0.at(0, j) = rs.exponential() / rho;
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= n; ++j) w0.at(i, j) = rs.exponential();
    const double g0 = last_passage(w0).at(m, n);
    const double gz = last_passage(apply_zeta(w0, zp, zm)).at(m, n);
    const double diff = g0 - gz;
    if (diff < -1e-12) acc.mono = false;
    for (std::size_t i = 0; i < u_list.size(); ++i)
      if (std::fabs(diff) >= u_list[i]) acc.cnt[i]++;
    acc.n++;
  });
  std::vector<long> cnt(u_list.size(), 0);
  long total = 0;
  for (const auto& a : chunks) {
    if (a.cnt.empty()) continue;
    for (std::size_t i = 0; i < u_list.size(); ++i) cnt[i] += a.cnt[i];
    rep.monotone_ok = rep.monotone_ok && a.mono;
    total += a.n;
  }
  rep.empirical.assign(u_list.size(), 0.0);
  rep.se.assign(u_list.size(), 0.0);
  rep.bound.assign(u_list.size(), 0.0);
  for (std::size_t i = 0; i < u_list.size(); ++i) {
    const double p = static_cast<double>(cnt[i]) / total;
    rep.empirical[i] = p;
    rep.se[i] = std::sqrt(p * (1.0 - p) / total + 1e-12);
    // union bound on the boundary-weight sums (rate form)
    const double bp = (zp > 0) ? zp * std::exp(-(1.0 - rho) * u_list[i] / zp) : 0.0;
    const double bm = (zm > 0) ? zm * std::exp(-rho * u_list[i] / zm) : 0.0;
    rep.bound[i] = bp + bm;
    if (p > rep.bound[i] + 3.0 * rep.se[i]) rep.within_bound = false;
  }
  return rep;
}

struct DensityReport {
  std::vector<double> bin_edges;
  std::vector<double> observed;  // counts / replicas
  std::vector<double> expected;  // integral of K^{a,b}(y,y) over the bin
  std::vector<double> sigma;     // per-bin standard errors
  double worst_sigma = 0.0;
  double mean_points = 0.0;
  long expected_total = 0;  // (4.7) count
  bool count_exact = true;
};

// One-point density of the RSK field at column 2d against the perturbed
// kernel diagonal K^{a,b}_{m,d}(y,y).
inline DensityReport density_vs_kernel(const ensemble::EnsembleParams& p, long replicas,
                                       std::uint64_t seed, int nbins = 40, double ymax = 12.0) {
  p.check();
  if (!(p.a > 0.0 && p.b > 0.0)) throw std::invalid_argument("density_vs_kernel: a, b in (0, 1/2)");
  const int tau = 2 * p.m + 1;
  if (tau > 15) throw std::invalid_argument("density_vs_kernel: tau = 2m+1 <= 15");
  LppConfig cfg;
  cfg.cols = tau;
  cfg.rows = tau;
  cfg.model = WeightModel::AbExponential;
  cfg.a = p.a;
  cfg.b = p.b;
  cfg.master_seed = seed;
  cfg.replicas = replicas;
  DensityReport rep;
  rep.bin_edges.resize(nbins + 1);
  for (int i = 0; i <= nbins; ++i) rep.bin_edges[i] = ymax * i / nbins;
  rep.expected_total = expected_point_count(tau);
  struct Acc {
    std::vector<long> hist;
    long pts = 0;
    bool exact = true;
    long n = 0;
  };
  const int col = 2 * p.d;
  auto chunks = parallel::run_replicas<Acc>(replicas, 1024, [&](long r, Acc& acc) {
    if (acc.hist.empty()) acc.hist.assign(nbins, 0);
    auto d = sample_weights(cfg, r);
    auto ens = rsk_lines(d, tau);
    long cnt = 0;
    for (const auto& line : ens.lines)
      for (double v : line)
        if (v > 0.0) ++cnt;
    if (cnt != rep.expected_total) acc.exact = false;
    acc.pts += cnt;
    for (const auto& line : ens.lines) {
      const double v = line[col + tau];
      if (v > 0.0 && v < ymax) acc.hist[static_cast<int>(v / ymax * nbins)]++;
    }
    acc.n++;
  });
  std::vector<long> hist(nbins, 0);
  long total = 0, pts = 0;
  for (const auto& a : chunks) {
    if (a.hist.empty()) continue;
    for (int i = 0; i < nbins; ++i) hist[i] += a.hist[i];
    rep.count_exact = rep.count_exact && a.exact;
    pts += a.pts;
    total += a.n;
  }
  rep.mean_points = static_cast<double>(pts) / total;
  auto kernel = ensemble::rank_one_kernel(p);
  rep.observed.assign(nbins, 0.0);
  rep.expected.assign(nbins, 0.0);
  rep.sigma.assign(nbins, 0.0);
  for (int i = 0; i < nbins; ++i) {
    rep.observed[i] = static_cast<double>(hist[i]) / total;
    rep.expected[i] = quad::integrate_segment(rep.bin_edges[i], rep.bin_edges[i + 1], 8,
                                              [&](double y) { return kernel.evaluate(y, y); });
    // determinantal bins have variance <= mean; add the MC counting floor
    rep.sigma[i] = std::sqrt(std::fmax(rep.expected[i], 1e-12) / total);
    const double dev = std::fabs(rep.observed[i] - rep.expected[i]) / rep.sigma[i];
    rep.worst_sigma = std::fmax(rep.worst_sigma, dev);
  }
  return rep;
}

}  // namespace stasep::lpp
