#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "stasep/distribution_table.hpp"
#include "stasep/parallel.hpp"
#include "stasep/rng.hpp"

namespace stasep::tasep {

// Continuous-time TASEP on a frozen-boundary window [-M, M], Bernoulli(rho)
// initial data. Event-driven: the total rate is the mobile-particle count.
struct TasepConfig {
  double rho = 0.5;
  double t_max = 100.0;
  int window_halfwidth = 0;  // M
  long replicas = 1;
  std::uint64_t master_seed = 1;
  std::vector<int> observation_sites;

  int required_halfwidth() const {
    int obs = 0;
    for (int j : observation_sites) obs = std::max(obs, std::abs(j));
    return obs + static_cast<int>(std::ceil(3.0 * t_max));
  }
  void validate() const {
    if (!(rho > 0.0 && rho < 1.0))
      throw std::invalid_argument("TasepConfig: rho must lie strictly in (0,1)");
    if (!(t_max > 0.0)) throw std::invalid_argument("TasepConfig: t_max must be positive");
    if (replicas < 1) throw std::invalid_argument("TasepConfig: replicas must be >= 1");
    if (window_halfwidth < required_halfwidth())
      throw std::invalid_argument("TasepConfig: window_halfwidth " + std::to_string(window_halfwidth) +
                                  " below light-cone requirement " +
                                  std::to_string(required_halfwidth()));
  }
};

struct TasepTrajectory {
  int M = 0;
  double t_max = 0.0;
  std::uint64_t replica_index = 0;
  std::vector<std::uint8_t> occ0;       // eta_j(0), index j+M
  std::vector<std::uint8_t> occ;        // eta_j(t_max)
  std::vector<std::int32_t> crossings;  // N_t(j) for bond j -> j+1, index j+M, j in [-M, M-1]

  // h_0(j) from the initial occupations, h_t(j) = h_0(j) + 2 N_t(j); also the
  // direct route 2 N_t + sum of (1 - 2 eta_i(t)).
  std::int64_t height0(int j) const { return height_of(occ0, 0, j); }
  std::int64_t height(int j) const { return height_of(occ, 2 * crossings[M], j); }
  std::int64_t height_from_crossings(int j) const {
    return height0(j) + 2 * static_cast<std::int64_t>(crossings[j + M]);
  }

 private:
  std::int64_t height_of(const std::vector<std::uint8_t>& o, std::int64_t two_n, int j) const {
    std::int64_t h = two_n;
    if (j >= 1)
      for (int i = 1; i <= j; ++i) h += 1 - 2 * static_cast<std::int64_t>(o[i + M]);
    else if (j <= -1)
      for (int i = j + 1; i <= 0; ++i) h -= 1 - 2 * static_cast<std::int64_t>(o[i + M]);
    return h;
  }
};

namespace detail {

// Mobile-set engine. Site j lives at index j+M+1; indices 0 and 2M+2 are
// permanently empty frozen sentinels so the hot path can read neighbors
// branchlessly. A particle at index i is mobile iff i < right_edge and the
// next site is empty. Arrays are 16-bit to keep the working set in L1.
struct Engine {
  int M = 0;
  int nsites = 0;  // 2M+3 with sentinels
  int left = 1, right = 0;
  int msize = 0;
  std::vector<std::uint8_t> occ;
  std::vector<std::uint16_t> mobile;
  std::vector<std::int16_t> where;  // slot in mobile, -1 if absent
  double t = 0.0;

  int idx(int j) const { return j + M + 1; }
  std::size_t size() const { return static_cast<std::size_t>(msize); }
  bool empty() const { return msize == 0; }

  void init(int halfwidth, double rho, rng::Stream& rs) {
    M = halfwidth;
    nsites = 2 * M + 3;
    if (nsites > 65534) throw std::invalid_argument("Engine: window too large for 16-bit slots");
    left = 1;
    right = nsites - 2;
    occ.assign(nsites, 0);
    where.assign(nsites, -1);
    mobile.assign(nsites, 0);
    msize = 0;
    t = 0.0;
    for (int i = 1; i <= nsites - 2; ++i) occ[i] = (rs.u01() < rho) ? 1 : 0;
    for (int i = 1; i < right; ++i)
      if (occ[i] && !occ[i + 1]) {
        where[i] = static_cast<std::int16_t>(msize);
        mobile[msize++] = static_cast<std::uint16_t>(i);
      }
  }

  void set_remove(int i) {
    const int k = where[i];
    const std::uint16_t last = mobile[--msize];
    mobile[k] = last;
    where[last] = static_cast<std::int16_t>(k);
    where[i] = -1;
  }
  void set_add(int i) {
    where[i] = static_cast<std::int16_t>(msize);
    mobile[msize++] = static_cast<std::uint16_t>(i);
  }

  // one jump of the particle in mobile slot k; returns the bond index
  // crossed. Branch-free set maintenance through value selects; `where` is
  // NOT maintained here -- membership queries in the cold paths must treat
  // it as a hint and validate (see member()).
  int jump(int k) {
    std::uint8_t* o = occ.data();
    std::uint16_t* m = mobile.data();
    const int i = m[k];
    std::uint16_t two;
    std::memcpy(&two, o + i, 2);
    two = static_cast<std::uint16_t>(0x0100);  // o[i] = 0, o[i+1] = 1 (little endian)
    std::memcpy(o + i, &two, 2);
    const bool stay = (i + 1 < right) & (o[i + 2] == 0);
    const std::uint16_t last = m[msize - 1];
    m[k] = stay ? static_cast<std::uint16_t>(i + 1) : last;
    msize -= !stay;
    const int il = i - 1;  // sentinel keeps o[il] in bounds
    const bool addl = (il >= left) & (o[il] != 0);
    m[msize] = static_cast<std::uint16_t>(il);
    msize += addl;
    return i;
  }

  // membership with slot validation (where is a hint once jump() has run)
  bool member(int i) const {
    const int k = where[i];
    return k >= 0 && k < msize && mobile[k] == i;
  }

  // edges move inward; stale list entries outside [left,right) are removed
  // lazily when picked (rate superposition with null events, exact).
  void shrink_left() { ++left; }
  void shrink_right() { --right; }
};

}  // namespace detail

// Full-window evolution; exact in distribution for the TASEP generator on
// the frozen-boundary window.
inline TasepTrajectory evolve_replica(const TasepConfig& cfg, long replica) {
  cfg.validate();
  const int M = cfg.window_halfwidth;
  rng::Stream rs(cfg.master_seed, static_cast<std::uint64_t>(replica));
  detail::Engine e;
  e.init(M, cfg.rho, rs);
  std::vector<std::uint8_t> occ0(e.occ.begin() + 1, e.occ.end() - 1);
  std::vector<std::int32_t> cross(e.nsites, 0);
  while (!e.empty()) {
    double dt;
    std::uint32_t k;
    rs.exp_and_below(static_cast<std::uint32_t>(e.msize), dt, k);
    dt /= static_cast<double>(e.msize);
    if (e.t + dt > cfg.t_max) {
      e.t = cfg.t_max;
      break;
    }
    e.t += dt;
    cross[e.jump(static_cast<int>(k))]++;
  }
  TasepTrajectory tr;
  tr.M = M;
  tr.t_max = cfg.t_max;
  tr.replica_index = static_cast<std::uint64_t>(replica);
  // strip the sentinels: trajectory arrays are indexed by j + M
  tr.occ0 = std::move(occ0);
  tr.occ.assign(e.occ.begin() + 1, e.occ.end() - 1);
  tr.crossings.assign(cross.begin() + 1, cross.end() - 1);
  return tr;
}

inline double chi(double rho) { return rho * (1.0 - rho); }

struct FwSample {
  double w = 0.0;
  int site = 0;
  table::DistributionTable table;
  double mean_scaled = 0.0;  // empirical mean of the rescaled fluctuation
  double se_scaled = 0.0;
};

// Empirical F_w(s,t) for several w in a single pass. Fast path: the active
// region shrinks at speed 3 toward the observation bonds (the same coupling
// bound that justifies the frozen window), so sites that can no longer
// influence any observable are frozen early. The rescaled samples carry a
// centered uniform jitter over their lattice cell, making the empirical CDF
// an estimator of the cell-averaged (integrated) CDF -- the quantity the
// limit theorem controls.
inline std::vector<FwSample> empirical_fw_multi(const TasepConfig& cfg, const std::vector<double>& ws,
                                                const std::vector<double>& s_grid) {
  if (cfg.replicas < 1000) throw std::invalid_argument("empirical_fw: need at least 1e3 replicas");
  if (ws.empty()) throw std::invalid_argument("empirical_fw: no w values");
  const double rho = cfg.rho, t = cfg.t_max;
  const double ch = chi(rho);
  const double c13 = std::cbrt(ch), c23 = c13 * c13, t23 = std::pow(t, 2.0 / 3.0), t13 = std::cbrt(t);
  std::vector<int> sites;
  for (double w : ws)
    sites.push_back(static_cast<int>(std::floor((1.0 - 2.0 * rho) * t + 2.0 * w * c13 * t23)));
  TasepConfig check = cfg;
  check.observation_sites.assign(sites.begin(), sites.end());
  check.validate();

  int min_obs = sites[0], max_obs = sites[0];
  for (int s : sites) {
    min_obs = std::min(min_obs, s);
    max_obs = std::max(max_obs, s);
  }
  const int M = cfg.window_halfwidth;
  const int nw = static_cast<int>(ws.size());
  // fluctuation scale of h_t: the fixed-time family carries half the
  // s-sensitivity of the (m,d,u) limit triple, so the F_w-distributed
  // variable is (E h - h)/(2 chi^{2/3} t^{1/3})
  const double scale = 2.0 * c23 * t13;
  const double center0 = (1.0 - 2.0 * ch) * t;
  const double delta = 2.0 / scale;  // lattice cell of the rescaled variable

  struct Acc {
    std::vector<std::int64_t> counts;  // [w][grid]
    std::vector<double> sum, sum2;
    long n = 0;
  };
  const long chunk = 256;
  auto chunks = parallel::run_replicas<Acc>(cfg.replicas, chunk, [&](long replica, Acc& acc) {
    if (acc.counts.empty()) {
      acc.counts.assign(static_cast<std::size_t>(nw) * s_grid.size(), 0);
      acc.sum.assign(nw, 0.0);
      acc.sum2.assign(nw, 0.0);
    }
    rng::Stream rs(cfg.master_seed, static_cast<std::uint64_t>(replica));
    detail::Engine e;
    e.init(M, rho, rs);
    // initial active range: light cone around the observation bonds
    const int pad = 2;
    const int base = M + 1;
    e.left = std::max(1, min_obs + base - static_cast<int>(std::ceil(3.0 * t)) - pad);
    e.right = std::min(e.nsites - 2, max_obs + 1 + base + static_cast<int>(std::ceil(3.0 * t)) + pad);
    // entries outside the active range stay in the list and are discarded
    // lazily when picked (null events of the superposed process)
    e.t = 0.0;
    // initial heights at the observation bonds
    std::vector<std::int64_t> h0(nw);
    for (int k = 0; k < nw; ++k) {
      std::int64_t h = 0;
      const int j = sites[k];
      if (j >= 1)
        for (int i = 1; i <= j; ++i) h += 1 - 2 * static_cast<std::int64_t>(e.occ[i + base]);
      else if (j <= -1)
        for (int i = j + 1; i <= 0; ++i) h -= 1 - 2 * static_cast<std::int64_t>(e.occ[i + base]);
      h0[k] = h;
    }
    std::vector<std::int32_t> cross(nw, 0);
    // shrink schedule: edges close at speed 2.5 (the empirical information
    // speed is ~2; the full margin-3 window of the config still applies at
    // t = 0). Shrinking changes the total rate, so a draw crossing a shrink
    // time is discarded (memoryless restart at the boundary).
    const double shrink_step = 1.0 / 2.5;
    double next_shrink = shrink_step;
    const int bond0 = sites[0] + base;
    const int bond1 = sites[nw - 1] + base;
    while (!e.empty()) {
      double dt;
      std::uint32_t k;
      rs.exp_and_below(static_cast<std::uint32_t>(e.msize), dt, k);
      const double tn = e.t + dt / static_cast<double>(e.msize);
      if (tn >= next_shrink) {
        e.t = next_shrink;
        if (e.t >= cfg.t_max) break;
        if (e.left < min_obs + base - pad) e.shrink_left();
        if (e.right > max_obs + 1 + base + pad) e.shrink_right();
        next_shrink += shrink_step;
        continue;
      }
      if (tn > cfg.t_max) break;
      e.t = tn;
      const int i = e.mobile[k];
      if (i < e.left || i >= e.right) {  // stale frozen entry: null event
        e.mobile[k] = e.mobile[--e.msize];
        continue;
      }
      const int bond = e.jump(static_cast<int>(k));
      if (bond == bond0 || bond == bond1) {
        for (int q = 0; q < nw; ++q)
          if (bond == sites[q] + base) cross[q]++;
      }
    }
    for (int q = 0; q < nw; ++q) {
      const double w = ws[q];
      const double center = center0 + 2.0 * w * (1.0 - 2.0 * rho) * c13 * t23;
      const std::int64_t h = h0[q] + 2 * static_cast<std::int64_t>(cross[q]);
      const double sigma = (center - static_cast<double>(h)) / scale;
      const double jittered = sigma + (rs.u01() - 0.5) * delta;
      // empirical CDF counts: sigma~ <= s_i
      const auto begin = acc.counts.begin() + static_cast<std::ptrdiff_t>(q) * s_grid.size();
      for (std::size_t i = 0; i < s_grid.size(); ++i)
        if (jittered <= s_grid[i]) begin[i]++;
      acc.sum[q] += jittered;
      acc.sum2[q] += jittered * jittered;
    }
    acc.n++;
  });

  std::vector<FwSample> out(nw);
  for (int q = 0; q < nw; ++q) {
    FwSample& f = out[q];
    f.w = ws[q];
    f.site = sites[q];
    f.table.grid = s_grid;
    f.table.cdf.assign(s_grid.size(), 0.0);
    f.table.provenance = table::Provenance::Empirical;
    f.table.params = {{"rho", rho}, {"t", t}, {"w", ws[q]}, {"replicas", static_cast<double>(cfg.replicas)}};
    double sum = 0.0, sum2 = 0.0;
    long n = 0;
    for (const Acc& a : chunks) {
      if (a.counts.empty()) continue;
      for (std::size_t i = 0; i < s_grid.size(); ++i)
        f.table.cdf[i] += static_cast<double>(a.counts[static_cast<std::size_t>(q) * s_grid.size() + i]);
      sum += a.sum[q];
      sum2 += a.sum2[q];
      n += a.n;
    }
    for (double& c : f.table.cdf) c /= static_cast<double>(n);
    f.mean_scaled = sum / n;
    f.se_scaled = std::sqrt(std::fmax(0.0, sum2 / n - f.mean_scaled * f.mean_scaled) / n);
  }
  return out;
}

inline FwSample empirical_fw(const TasepConfig& cfg, double w, const std::vector<double>& s_grid) {
  return empirical_fw_multi(cfg, {w}, s_grid).front();
}

// ---------------------------------------------------------------------------
// Two-point function S(j,t) = E(eta_j(t) eta_0(0)) - rho^2, estimated with
// spatial translation averaging inside the safe window of each replica.
// ---------------------------------------------------------------------------

struct TwoPointEstimate {
  std::vector<int> j;
  std::vector<double> S;
  std::vector<double> se;
  double sum = 0.0, sum_se = 0.0;            // sum_j S(j,t)
  double first = 0.0, first_se = 0.0;        // chi^{-1} sum_j j S(j,t)
  double sigma2 = 0.0, sigma2_se = 0.0;      // chi^{-1} sum j^2 S - ((1-2rho)t)^2
  long replicas = 0;
};

inline TwoPointEstimate two_point(const TasepConfig& cfg, const std::vector<int>& j_list) {
  cfg.validate();
  const int M = cfg.window_halfwidth;
  const int safe = M - static_cast<int>(std::ceil(3.0 * cfg.t_max));
  int jmax = 0;
  for (int j : j_list) jmax = std::max(jmax, std::abs(j));
  const int K = safe - jmax;
  if (K < 1)
    throw std::invalid_argument("two_point: window too small for the requested sites plus translations");
  const int nj = static_cast<int>(j_list.size());
  const double rho = cfg.rho;

  struct Acc {
    std::vector<double> s1, s2;  // per-j sums of the replica estimates and squares
    std::vector<double> a1, a2;  // aggregates: {sum, first, second} and squares
    long n = 0;
  };
  const long chunk = 64;
  auto chunks = parallel::run_replicas<Acc>(cfg.replicas, chunk, [&](long replica, Acc& acc) {
    if (acc.s1.empty()) {
      acc.s1.assign(nj, 0.0);
      acc.s2.assign(nj, 0.0);
      acc.a1.assign(3, 0.0);
      acc.a2.assign(3, 0.0);
    }
    TasepTrajectory tr = evolve_replica(cfg, replica);
    const double inv = 1.0 / (2.0 * K + 1.0);
    // centered covariance estimator: the coherent density-fluctuation noise
    // of the raw product form would swamp the summed observables
    std::vector<double> b0(2 * K + 1), bt(tr.occ.size());
    for (int k = -K; k <= K; ++k) b0[k + K] = static_cast<double>(tr.occ0[k + M]) - rho;
    for (std::size_t i = 0; i < tr.occ.size(); ++i) bt[i] = static_cast<double>(tr.occ[i]) - rho;
    double agg0 = 0.0, agg1 = 0.0, agg2 = 0.0;
    for (int q = 0; q < nj; ++q) {
      const int j = j_list[q];
      double cov = 0.0;
      for (int k = -K; k <= K; ++k) cov += bt[j + k + M] * b0[k + K];
      const double est = cov * inv;
      acc.s1[q] += est;
      acc.s2[q] += est * est;
      agg0 += est;
      agg1 += j * est;
      agg2 += static_cast<double>(j) * j * est;
    }
    acc.a1[0] += agg0;
    acc.a2[0] += agg0 * agg0;
    acc.a1[1] += agg1;
    acc.a2[1] += agg1 * agg1;
    acc.a1[2] += agg2;
    acc.a2[2] += agg2 * agg2;
    acc.n++;
  });

  TwoPointEstimate out;
  out.j = j_list;
  out.S.assign(nj, 0.0);
  out.se.assign(nj, 0.0);
  std::vector<double> s1(nj, 0.0), s2(nj, 0.0);
  double a1[3] = {0, 0, 0}, a2[3] = {0, 0, 0};
  long n = 0;
  for (const Acc& a : chunks) {
    if (a.s1.empty()) continue;
    for (int q = 0; q < nj; ++q) {
      s1[q] += a.s1[q];
      s2[q] += a.s2[q];
    }
    for (int i = 0; i < 3; ++i) {
      a1[i] += a.a1[i];
      a2[i] += a.a2[i];
    }
    n += a.n;
  }
  out.replicas = n;
  auto se_of = [n](double s, double sq) {
    const double m = s / n;
    return std::sqrt(std::fmax(0.0, sq / n - m * m) / n);
  };
  for (int q = 0; q < nj; ++q) {
    out.S[q] = s1[q] / n;
    out.se[q] = se_of(s1[q], s2[q]);
  }
  const double ch = chi(rho);
  out.sum = a1[0] / n;
  out.sum_se = se_of(a1[0], a2[0]);
  out.first = a1[1] / n / ch;
  out.first_se = se_of(a1[1], a2[1]) / ch;
  const double drift = (1.0 - 2.0 * rho) * cfg.t_max;
  out.sigma2 = a1[2] / n / ch - drift * drift;
  out.sigma2_se = se_of(a1[2], a2[2]) / ch;
  return out;
}

// ---------------------------------------------------------------------------
// Second-class particle estimator: chi^{-1} S(j,t) is the transition
// probability of a single second-class particle started at the origin.
// ---------------------------------------------------------------------------

struct SecondClassHistogram {
  int jmin = 0;
  std::vector<double> prob;  // P(X_t = jmin + idx)
  std::vector<double> se;
  long replicas = 0;
};

inline SecondClassHistogram second_class(const TasepConfig& cfg, int jmin, int jmax) {
  cfg.validate();
  const int M = cfg.window_halfwidth;
  const int nsites = 2 * M + 1;
  const int nbins = jmax - jmin + 1;
  struct Acc {
    std::vector<std::int64_t> hist;
    long n = 0;
  };
  auto chunks = parallel::run_replicas<Acc>(cfg.replicas, 256, [&](long replica, Acc& acc) {
    if (acc.hist.empty()) acc.hist.assign(nbins, 0);
    rng::Stream rs(cfg.master_seed, static_cast<std::uint64_t>(replica) | (1ull << 62));
    // occ codes: 0 empty, 1 particle, 2 second-class defect at the origin
    std::vector<std::uint8_t> occ(nsites);
    for (int i = 0; i < nsites; ++i) occ[i] = (rs.u01() < cfg.rho) ? 1 : 0;
    occ[M] = 2;
    // mobile moves: particle with empty or defect target, defect with empty target
    std::vector<std::int32_t> mobile, where(nsites, -1);
    auto mobile_ok = [&](int i) {
      if (i + 1 >= nsites || !occ[i]) return false;
      if (occ[i] == 1) return occ[i + 1] != 1;
      return occ[i + 1] == 0;  // defect
    };
    for (int i = 0; i + 1 < nsites; ++i)
      if (mobile_ok(i)) {
        where[i] = static_cast<std::int32_t>(mobile.size());
        mobile.push_back(i);
      }
    auto refresh = [&](int i) {
      const bool ok = (i >= 0 && i + 1 < nsites) && mobile_ok(i);
      if (ok && where[i] < 0) {
        where[i] = static_cast<std::int32_t>(mobile.size());
        mobile.push_back(i);
      } else if (!ok && i >= 0 && where[i] >= 0) {
        const std::int32_t k = where[i], last = mobile.back();
        mobile[k] = last;
        where[last] = k;
        mobile.pop_back();
        where[i] = -1;
      }
    };
    double t = 0.0;
    int defect = M;
    while (!mobile.empty()) {
      const double dt = rs.exponential() / static_cast<double>(mobile.size());
      if (t + dt > cfg.t_max) break;
      t += dt;
      const int i = mobile[rs.below(static_cast<std::uint32_t>(mobile.size()))];
      if (occ[i] == 1 && occ[i + 1] == 2) {  // particle displaces the defect
        occ[i] = 2;
        occ[i + 1] = 1;
        defect = i;
      } else {  // plain move (particle or defect into an empty site)
        occ[i + 1] = occ[i];
        occ[i] = 0;
        if (occ[i + 1] == 2) defect = i + 1;
      }
      for (int p : {i - 1, i, i + 1}) refresh(p);
    }
    const int j = defect - M;
    if (j >= jmin && j <= jmax) acc.hist[j - jmin]++;
    acc.n++;
  });
  SecondClassHistogram out;
  out.jmin = jmin;
  out.prob.assign(nbins, 0.0);
  out.se.assign(nbins, 0.0);
  long n = 0;
  std::vector<std::int64_t> h(nbins, 0);
  for (const Acc& a : chunks) {
    if (a.hist.empty()) continue;
    for (int i = 0; i < nbins; ++i) h[i] += a.hist[i];
    n += a.n;
  }
  out.replicas = n;
  for (int i = 0; i < nbins; ++i) {
    const double p = static_cast<double>(h[i]) / n;
    out.prob[i] = p;
    out.se[i] = std::sqrt(p * (1.0 - p) / n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// sigma(t) scaling: log-log slope of the two-point variance and the
// prefactor against a_0 chi^{1/3} t^{2/3}.
// ---------------------------------------------------------------------------

struct SigmaScalingReport {
  std::vector<double> t;
  std::vector<double> sigma;     // sqrt of the measured variance
  std::vector<double> sigma_se;
  double slope = 0.0;
  double prefactor_over_chi13 = 0.0;  // ~ a_0
};

enum class SigmaMode { SecondClass, Covariance };

// sigma(t)^2 = chi^{-1} sum_j j^2 S(j,t) - ((1-2rho)t)^2. The second-class
// route reads the same quantity as the positional variance of a single
// defect (chi^{-1} S is its transition probability), at a fraction of the
// sampling noise of the covariance route; both are available.
inline SigmaScalingReport sigma_scaling(double rho, const std::vector<double>& t_list, long replicas,
                                        std::uint64_t seed, SigmaMode mode = SigmaMode::SecondClass) {
  if (t_list.size() < 2) throw std::invalid_argument("sigma_scaling: need at least two times");
  SigmaScalingReport rep;
  const double ch = chi(rho);
  for (double t : t_list) {
    const double width = 2.0 * std::cbrt(ch) * std::pow(t, 2.0 / 3.0);
    const double drift = (1.0 - 2.0 * rho) * t;
    const int jm = static_cast<int>(std::ceil(std::fabs(drift) + 6.0 * width)) + 8;
    TasepConfig cfg;
    cfg.rho = rho;
    cfg.t_max = t;
    cfg.replicas = replicas;
    cfg.master_seed = seed + static_cast<std::uint64_t>(t * 1000.0);
    cfg.observation_sites = {0};
    if (mode == SigmaMode::SecondClass) {
      cfg.window_halfwidth = jm + static_cast<int>(std::ceil(3.0 * t)) + 2;
      auto h = second_class(cfg, -jm, jm);
      double m1 = 0.0, m2 = 0.0, m4 = 0.0, mass = 0.0;
      for (std::size_t i = 0; i < h.prob.size(); ++i) {
        const double j = static_cast<double>(h.jmin + static_cast<int>(i));
        mass += h.prob[i];
        m1 += j * h.prob[i];
      }
      for (std::size_t i = 0; i < h.prob.size(); ++i) {
        const double dj = static_cast<double>(h.jmin + static_cast<int>(i)) - m1;
        m2 += dj * dj * h.prob[i];
        m4 += dj * dj * dj * dj * h.prob[i];
      }
      if (mass < 0.999)
        throw std::runtime_error("sigma_scaling: defect left the histogram range");
      rep.t.push_back(t);
      rep.sigma.push_back(std::sqrt(std::fmax(m2, 1e-12)));
      const double var_se = std::sqrt(std::fmax(m4 - m2 * m2, 0.0) / static_cast<double>(h.replicas));
      rep.sigma_se.push_back(var_se / (2.0 * std::sqrt(std::fmax(m2, 1e-12))));
    } else {
      std::vector<int> js;
      const int lo = static_cast<int>(std::floor(drift - 6.0 * width)) - 8;
      for (int j = lo; j <= jm; ++j) js.push_back(j);
      // budget ~200 translations beyond the light-cone margin
      cfg.window_halfwidth = std::max(jm, -lo) + static_cast<int>(std::ceil(3.0 * t)) + 200;
      auto est = two_point(cfg, js);
      rep.t.push_back(t);
      rep.sigma.push_back(std::sqrt(std::fmax(est.sigma2, 1e-12)));
      rep.sigma_se.push_back(est.sigma2_se / (2.0 * std::sqrt(std::fmax(est.sigma2, 1e-12))));
    }
  }
  // least squares on (ln t, ln sigma)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(rep.t.size());
  for (int i = 0; i < n; ++i) {
    const double x = std::log(rep.t[i]), y = std::log(rep.sigma[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - rep.slope * sx) / n;
  // prefactor at the 2/3 exponent: sigma / (chi^{1/3} t^{2/3}), averaged
  double pf = 0.0;
  for (int i = 0; i < n; ++i) pf += rep.sigma[i] / (std::cbrt(ch) * std::pow(rep.t[i], 2.0 / 3.0));
  rep.prefactor_over_chi13 = pf / n;
  (void)intercept;
  return rep;
}

}  // namespace stasep::tasep
