#include <doctest.h>

#include <cmath>
#include <vector>

#include "stasep/lpp.hpp"
#include "stasep/stats.hpp"

using namespace stasep;

namespace {

// exhaustive up/right path maximum, test oracle for the DP table
double brute_force_g(const lpp::WeightDraw& d, int m, int n) {
  double best = -1e300;
  // encode a path as the set of positions of the m "right" steps among m+n
  std::vector<int> steps(m + n, 0);
  for (int i = 0; i < m; ++i) steps[i] = 1;
  std::sort(steps.begin(), steps.end());
  do {
    double s = d.at(0, 0);
    int x = 0, y = 0;
    for (int st : steps) {
      if (st)
        ++x;
      else
        ++y;
      s += d.at(x, y);
    }
    best = std::fmax(best, s);
  } while (std::next_permutation(steps.begin(), steps.end()));
  return best;
}

lpp::LppConfig stationary_cfg(double rho, int m, int n, std::uint64_t seed) {
  lpp::LppConfig cfg;
  cfg.cols = m;
  cfg.rows = n;
  cfg.model = lpp::WeightModel::StationaryZeta;
  cfg.rho = rho;
  cfg.master_seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("dp equals exhaustive path enumeration") {
  for (long r = 0; r < 100; ++r) {
    lpp::LppConfig cfg;
    cfg.cols = 3 + static_cast<int>(r % 2);
    cfg.rows = 4 - static_cast<int>(r % 2);
    cfg.model = lpp::WeightModel::AbExponential;
    cfg.a = 0.2;
    cfg.b = 0.1;
    cfg.master_seed = 7000 + r;
    auto d = lpp::sample_weights(cfg, r);
    auto g = lpp::last_passage(d);
    CHECK(g.at(cfg.cols, cfg.rows) == doctest::Approx(brute_force_g(d, cfg.cols, cfg.rows)).epsilon(1e-14));
  }
}

TEST_CASE("degenerate grids") {
  auto cfg = stationary_cfg(0.5, 0, 0, 5);
  auto d = lpp::sample_weights(cfg, 0);
  CHECK(d.at(0, 0) == 0.0);  // w(0,0) = 0 always
  CHECK(lpp::last_passage(d).at(0, 0) == 0.0);
  // single row: G(m,0) = sum of the first-row weights
  auto cfg2 = stationary_cfg(0.4, 5, 0, 6);
  auto d2 = lpp::sample_weights(cfg2, 3);
  double s = 0.0;
  for (int i = 0; i <= 5; ++i) s += d2.at(i, 0);
  CHECK(lpp::last_passage(d2).at(5, 0) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("stationary-zeta boundary and zeta distributions") {
  const double rho = 0.3;
  auto cfg = stationary_cfg(rho, 6, 6, 99);
  long z_plus_zero = 0, z_minus_zero = 0;
  double row_sum = 0.0, col_sum = 0.0;
  long row_n = 0, col_n = 0;
  const long R = 20000;
  for (long r = 0; r < R; ++r) {
    auto d = lpp::sample_weights(cfg, r);
    CHECK(d.at(0, 0) == 0.0);
    if (d.zeta_plus == 0) {
      ++z_plus_zero;
      row_sum += d.at(1, 0);
      ++row_n;
    }
    if (d.zeta_minus == 0) {
      ++z_minus_zero;
      col_sum += d.at(0, 1);
      ++col_n;
    }
  }
  // P(zeta_+ = 0) = rho, P(zeta_- = 0) = 1 - rho
  CHECK(std::fabs(static_cast<double>(z_plus_zero) / R - rho) <= 3.5 * std::sqrt(rho * (1 - rho) / R));
  CHECK(std::fabs(static_cast<double>(z_minus_zero) / R - (1 - rho)) <=
        3.5 * std::sqrt(rho * (1 - rho) / R));
  // unzeroed boundary means (1-rho)^{-1} and rho^{-1}
  CHECK(std::fabs(row_sum / row_n - 1.0 / (1 - rho)) <= 4.0 / ((1 - rho) * std::sqrt(double(row_n))));
  CHECK(std::fabs(col_sum / col_n - 1.0 / rho) <= 4.0 / (rho * std::sqrt(double(col_n))));
}

TEST_CASE("ab-exponential means at a=b=0") {
  lpp::LppConfig cfg;
  cfg.cols = 4;
  cfg.rows = 4;
  cfg.model = lpp::WeightModel::AbExponentialZeroCorner;
  cfg.a = 0.0;
  cfg.b = 0.0;
  cfg.master_seed = 11;
  double row = 0.0, interior = 0.0;
  const long R = 20000;
  for (long r = 0; r < R; ++r) {
    auto d = lpp::sample_weights(cfg, r);
    row += d.at(2, 0);
    interior += d.at(2, 2);
  }
  CHECK(std::fabs(row / R - 2.0) <= 4.0 * 2.0 / std::sqrt(double(R)));
  CHECK(std::fabs(interior / R - 1.0) <= 4.0 / std::sqrt(double(R)));
}

TEST_CASE("geometric interior mean") {
  lpp::LppConfig cfg;
  cfg.cols = 3;
  cfg.rows = 3;
  cfg.model = lpp::WeightModel::Geometric;
  cfg.q = 0.5;
  cfg.alpha = 0.9;
  cfg.beta = 0.9;
  cfg.master_seed = 21;
  double s = 0.0;
  const long R = 30000;
  for (long r = 0; r < R; ++r) s += lpp::sample_weights(cfg, r).at(2, 2);
  CHECK(std::fabs(s / R - 1.0) <= 4.0 * std::sqrt(2.0 / double(R)));  // q/(1-q) = 1
}

TEST_CASE("growth dynamics reproduces the dp heights") {
  for (long r = 0; r < 40; ++r) {
    lpp::LppConfig cfg;
    cfg.cols = 8;
    cfg.rows = 8;
    cfg.model = (r % 2) ? lpp::WeightModel::Geometric : lpp::WeightModel::AbExponentialZeroCorner;
    cfg.a = 0.5 - 0.5;  // stationary pin at rho = 1/2 would be a = 0
    cfg.b = 0.0;
    cfg.master_seed = 1234 + r;
    auto d = lpp::sample_weights(cfg, r);
    auto g = lpp::last_passage(d);
    const int tau = 8;
    auto ens = lpp::rsk_lines(d, tau);
    auto h = lpp::height_from_g(g, tau);
    for (int j = -tau; j <= tau; ++j) {
      CHECK(ens.at(0, j) == doctest::Approx(h[j + tau]).epsilon(1e-12));
    }
  }
}

TEST_CASE("rsk line ensemble: pinning, ordering, point count") {
  for (long r = 0; r < 30; ++r) {
    lpp::LppConfig cfg;
    cfg.cols = 9;
    cfg.rows = 9;
    cfg.model = lpp::WeightModel::AbExponential;
    cfg.a = 0.3;
    cfg.b = 0.3;
    cfg.master_seed = 555 + r;
    auto d = lpp::sample_weights(cfg, r);
    const int tau = 9;
    auto ens = lpp::rsk_lines(d, tau);
    // boundary pinning
    for (std::size_t l = 0; l < ens.lines.size(); ++l) {
      CHECK(ens.lines[l][0] == 0.0);
      CHECK(ens.lines[l][2 * tau] == 0.0);
    }
    // lines do not cross: h_{l}(j) <= h_{l-1}(j) and the interlacing holds
    for (std::size_t l = 1; l < ens.lines.size(); ++l)
      for (int j = -tau; j <= tau; ++j) CHECK(ens.at(-static_cast<int>(l), j) <= ens.at(-static_cast<int>(l) + 1, j) + 1e-12);
    for (int j = -tau; j < tau; ++j) {
      // ascending step out of even parity sites, descending out of odd ones
      const bool even = ((j + tau) % 2 + 2) % 2 == 0;
      for (std::size_t l = 0; l < ens.lines.size(); ++l) {
        const double x = ens.lines[l][j + tau], xp = ens.lines[l][j + 1 + tau];
        if (even)
          CHECK(xp + 1e-12 >= x);
        else
          CHECK(x + 1e-12 >= xp);
      }
    }
    // strictly positive weight => exact point count (4.7)
    CHECK(lpp::positive_point_count(ens) == lpp::expected_point_count(tau));
  }
  // tau = 1: single point, the corner weight
  lpp::LppConfig c1;
  c1.cols = 1;
  c1.rows = 1;
  c1.model = lpp::WeightModel::AbExponential;
  c1.a = 0.2;
  c1.b = 0.2;
  c1.master_seed = 31;
  auto d1 = lpp::sample_weights(c1, 0);
  auto e1 = lpp::rsk_lines(d1, 1);
  CHECK(e1.at(0, 0) == doctest::Approx(d1.at(0, 0)));
  CHECK(lpp::expected_point_count(1) == 1);
}

TEST_CASE("coupling of the two simulators at (rho,m,n) = (1/2,3,3)") {
  auto rep = lpp::coupling_check(0.5, 3, 3, 20000, 424242);
  CHECK(rep.max_gap_sigma <= 3.5);
}

TEST_CASE("single-path closed form through the zeta weights") {
  // G(1,0) = w_zeta(1,0): P(G <= t) = (1-rho) + rho (1 - e^{-(1-rho) t})
  const double rho = 0.5;
  auto cfg = stationary_cfg(rho, 1, 0, 777);
  const long R = 40000;
  const double t0 = 1.7;
  long cnt = 0;
  for (long r = 0; r < R; ++r) {
    auto d = lpp::sample_weights(cfg, r);
    if (lpp::last_passage(d).at(1, 0) <= t0) ++cnt;
  }
  const double expect = (1 - rho) + rho * (1 - std::exp(-(1 - rho) * t0));
  CHECK(std::fabs(static_cast<double>(cnt) / R - expect) <= 3.5 * std::sqrt(expect * (1 - expect) / R));
}

TEST_CASE("zeta coupling bound and monotonicity") {
  // zeta = (0,0): no difference at all
  auto rep0 = lpp::zeta_bound_check(0.5, 4, 4, 0, 0, {0.5}, 4000, 31337);
  CHECK(rep0.empirical[0] == 0.0);
  // zeta = (1,0), rho = 1/2: corrected rate-form bound e^{-u/2}
  auto rep = lpp::zeta_bound_check(0.5, 4, 4, 1, 0, {1.0, 2.0, 4.0}, 40000, 1999);
  CHECK(rep.monotone_ok);
  CHECK(rep.within_bound);
  CHECK(rep.bound[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  auto rep2 = lpp::zeta_bound_check(0.5, 4, 4, 2, 1, {1.0, 2.0, 4.0}, 40000, 2001);
  CHECK(rep2.monotone_ok);
  CHECK(rep2.within_bound);
}

TEST_CASE("geometric model converges to the exponential one") {
  const double eps = 0.008, a = 0.2, b = 0.1;
  lpp::LppConfig geo;
  geo.cols = 4;
  geo.rows = 4;
  geo.model = lpp::WeightModel::Geometric;
  geo.q = 1.0 - eps;
  geo.alpha = 1.0 - eps * a;
  geo.beta = 1.0 - eps * b;
  geo.master_seed = 2025;
  lpp::LppConfig ex;
  ex.cols = 4;
  ex.rows = 4;
  ex.model = lpp::WeightModel::AbExponential;
  ex.a = a;
  ex.b = b;
  ex.master_seed = 2026;
  const long R = 20000;
  std::vector<double> gs, es;
  for (long r = 0; r < R; ++r) {
    gs.push_back(eps * lpp::last_passage(lpp::sample_weights(geo, r)).at(4, 4));
    es.push_back(lpp::last_passage(lpp::sample_weights(ex, r)).at(4, 4));
  }
  auto ks = stats::ks_two_sample(std::move(gs), std::move(es));
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("one-point density matches the perturbed kernel diagonal") {
  ensemble::EnsembleParams p;
  p.m = 3;
  p.d = 0;
  p.a = 0.3;
  p.b = 0.3;
  auto rep = lpp::density_vs_kernel(p, 150000, 987654);
  CHECK(rep.count_exact);
  CHECK(rep.mean_points == doctest::Approx(static_cast<double>(rep.expected_total)));
  CHECK(rep.worst_sigma <= 4.5);
}

TEST_CASE("density check pins the a/b convention at asymmetric parameters") {
  // a attaches to the first row, b to the first column; a swap would show up
  // as many-sigma deviations from the kernel diagonal
  ensemble::EnsembleParams p;
  p.m = 3;
  p.d = 1;
  p.a = 0.35;
  p.b = 0.1;
  auto rep = lpp::density_vs_kernel(p, 200000, 24601);
  CHECK(rep.worst_sigma <= 4.5);
  ensemble::EnsembleParams q = p;
  q.d = -1;
  auto repm = lpp::density_vs_kernel(q, 200000, 24602);
  // d-shift symmetry: both densities match the same (transpose-equal) diagonal
  CHECK(repm.worst_sigma <= 4.5);
}

TEST_CASE("replica reproducibility") {
  auto cfg = stationary_cfg(0.5, 3, 3, 8888);
  auto a = lpp::sample_weights(cfg, 17);
  auto b = lpp::sample_weights(cfg, 17);
  CHECK(a.w == b.w);
  CHECK(a.zeta_plus == b.zeta_plus);
}
