#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "stasep/airy.hpp"
#include "stasep/airy_edge.hpp"
#include "stasep/contour.hpp"
#include "stasep/laguerre.hpp"
#include "stasep/laguerre_ensemble.hpp"
#include "stasep/lpp.hpp"
#include "stasep/painleve.hpp"
#include "stasep/quadrature.hpp"
#include "stasep/stats.hpp"
#include "stasep/tasep.hpp"

namespace stasep::suites {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

inline void add(SuiteReport& rep, const std::string& name, bool pass, double value, double tol) {
  rep.checks.push_back({name, pass, "value " + fmt(value) + " tol " + fmt(tol)});
}

// ---- full-line oracle for <psi_a, (1-K) psi_b> ------------------------------
// Independent of the g_ell/g_r route: T_-^{-q} acts distributionally on
// P_- psi_b (delta terms kept explicitly), then T_+^{p} integrates.
struct Poly {
  std::vector<double> c;
  double eval(double t) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
    return v;
  }
  Poly half_minus_deriv() const {
    Poly out;
    out.c.assign(c.size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      out.c[k] += 0.5 * c[k];
      if (k + 1 < c.size()) out.c[k] -= (k + 1.0) * c[k + 1];
    }
    return out;
  }
};

inline double kpsi_fullline(int m, int d, double b, double x) {
  const int p = m + d, q = m - d;
  std::vector<double> prev;
  for (int k = 0; k < q; ++k) {
    std::vector<double> next(k + 1, 0.0);
    next[0] = std::pow(0.5 + b, k) + (k > 0 ? 0.5 * prev[0] : 0.0);
    for (int i = 1; i <= k; ++i) next[i] = ((i <= k - 1) ? 0.5 * prev[i] : 0.0) - prev[i - 1];
    prev = next;
  }
  Poly base;
  base.c.assign(p, 0.0);
  double fact = 1.0;
  for (int k = 2; k <= p - 1; ++k) fact *= k;
  base.c[p - 1] = 1.0 / fact;
  const double hi = std::fmin(x, 0.0);
  double smooth = quad::integrate_halfline(0.0, 4.0, 200, [&](double v) {
    const double z = hi - v;
    const double t = x - z;
    if (t <= 0.0) return 0.0;
    const double pe = base.eval(t);
    if (pe == 0.0) return 0.0;
    return (pe > 0 ? 1.0 : -1.0) * std::exp(-0.5 * t - b * z + std::log(std::fabs(pe)));
  });
  smooth *= std::pow(0.5 + b, q);
  double deltas = 0.0;
  if (x > 0.0) {
    Poly cur = base;
    for (int i = 0; i < q; ++i) {
      const double der = std::exp(-0.5 * x) * cur.eval(x);
      deltas += prev[i] * ((i % 2 == 0) ? 1.0 : -1.0) * der;
      cur = cur.half_minus_deriv();
    }
  }
  return ensemble::z_factor(-b, m, d).value() * (smooth + deltas);
}

inline double psi_pairing_quadrature(double a, double b, int m, int d) {
  return quad::integrate_halfline(0.0, 4.0, 200, [&](double x) {
    return std::exp(-a * x) * (std::exp(-b * x) - kpsi_fullline(m, d, b, x));
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// identities: the exact/numeric algebra of the analytic stack.
// ---------------------------------------------------------------------------
inline SuiteReport identities_suite(bool full = false) {
  using detail::add;
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = "identities";

  {  // quadrature exactness
    double worst = 0.0;
    for (int order : {2, 4, 8, 16, 32, 64, 128, 256}) {
      const auto& r = quad::gauss_legendre(order);
      for (int k = 0; k <= 2 * order - 1; ++k) {
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
        const double exact = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
        worst = std::fmax(worst, std::fabs(s - exact) / (2.0 / (k + 1.0)));
      }
    }
    add(rep, "quadrature exactness deg <= 2n-1", worst <= 1e-13, worst, 1e-13);
  }
  {  // Airy ODE residual
    double worst = 0.0;
    const double h = 0.01;
    for (double x = -10.0; x <= 5.0 + 1e-9; x += 0.5) {
      const double d2 = (-airy::airy_ai(x + 2 * h) + 16 * airy::airy_ai(x + h) - 30 * airy::airy_ai(x) +
                         16 * airy::airy_ai(x - h) - airy::airy_ai(x - 2 * h)) /
                        (12 * h * h);
      worst = std::fmax(worst, std::fabs(d2 - x * airy::airy_ai(x)));
    }
    add(rep, "airy ODE residual on grid", worst <= 1e-6, worst, 1e-6);
  }
  {  // exponential-moment identity
    double worst = 0.0;
    for (double w : {0.0, 0.25, 0.5, 1.0, 2.0})
      for (double beta : {-1.0, 0.0, 1.0, 3.0}) {
        const double expect = std::exp(w * w * w / 3.0 - beta * w);
        worst = std::fmax(worst, std::fabs(airy::airy_identity_check(w, beta) - expect) /
                                     std::fmax(1.0, expect));
      }
    add(rep, "airy exponential-moment identity", worst <= 1e-8, worst, 1e-8);
  }
  {  // Laguerre orthonormality
    double worst = 0.0;
    for (int alpha : {0, 2, 4})
      for (int n = 0; n <= 8; ++n)
        for (int mm = n; mm <= 8; ++mm) {
          const double s = quad::integrate_halfline(0.0, 6.0, 200, [&](double x) {
            auto f = laguerre::normalized_functions(9, alpha, x);
            return f[n] * f[mm];
          });
          worst = std::fmax(worst, std::fabs(s - (n == mm ? 1.0 : 0.0)));
        }
    add(rep, "laguerre orthonormality n,m <= 8", worst <= 1e-9, worst, 1e-9);
  }
  {  // residue values +-s
    using cplx = std::complex<double>;
    const double w = 1.0, s = 0.7;
    auto path = contour::ContourPath::circle({w, 0.0}, 0.5);
    auto f1 = [&](cplx xi) {
      return std::exp(xi * xi * xi / 3.0 - w * w * w / 3.0 + (w * w + s) * (w - xi)) /
             (cplx(0.0, 2.0 * M_PI) * (w - xi) * (w - xi));
    };
    auto f2 = [&](cplx xi) {
      return std::exp(-xi * xi * xi / 3.0 + w * w * w / 3.0 + (w * w + s) * (xi - w)) /
             (cplx(0.0, 2.0 * M_PI) * (xi - w) * (xi - w));
    };
    const double e1 = std::abs(contour::contour_integral(f1, path, 128) + s);
    const double e2 = std::abs(contour::contour_integral(f2, path, 128) - s);
    add(rep, "pole integrals equal -s and +s", std::fmax(e1, e2) <= 1e-10, std::fmax(e1, e2), 1e-10);
  }
  {  // CP1/CP2 and contour-vs-polynomial kernel equality, rho independence
    double worst = 0.0;
    struct MD {
      int m, d;
    };
    for (const MD& md : {MD{2, 0}, MD{3, 1}, MD{5, 2}}) {
      for (double rho : {0.3, 0.5, 0.7}) {
        for (double x : {0.7, 2.0})
          for (double y : {1.5, 3.1}) {
            const double poly = ensemble::k_md_point(md.m, md.d, x, y);
            const double cont = ensemble::k_md_contour_point(md.m, md.d, rho, x, y);
            worst = std::fmax(worst, std::fabs(poly - cont) / std::fmax(std::fabs(poly), 1e-8));
          }
      }
      // CP1: d -> -d is the transpose, equal diagonals and determinants
      worst = std::fmax(worst, std::fabs(ensemble::k_md_point(md.m, -md.d, 1.3, 2.4) -
                                         ensemble::k_md_point(md.m, md.d, 2.4, 1.3)) /
                                   std::fmax(std::fabs(ensemble::k_md_point(md.m, md.d, 2.4, 1.3)), 1e-8));
    }
    add(rep, "kernel representations agree (CP1/CP2, contour)", worst <= 1e-8, worst, 1e-8);
  }
  {  // trace = m - d
    auto rule = ensemble::laguerre_rule(0.0, 4, 1, 160);
    double tr = 0.0;
    for (int i = 0; i < rule.order; ++i)
      tr += rule.weights[i] * ensemble::k_md_point(4, 1, rule.nodes[i], rule.nodes[i]);
    add(rep, "trace equals m-d", std::fabs(tr - 3.0) <= 1e-8, std::fabs(tr - 3.0), 1e-8);
  }
  {  // <psi_a, (1-K) psi_b> = Z_ab by quadrature (distributional oracle)
    double worst = 0.0;
    struct T {
      double a, b;
      int m, d;
    };
    for (const T& t : {T{0.2, 0.1, 4, 1}, T{0.3, 0.3, 3, 0}, T{0.1, 0.25, 5, 2}}) {
      const double v = detail::psi_pairing_quadrature(t.a, t.b, t.m, t.d);
      const double zab = ensemble::z_ab(t.a, t.b, t.m, t.d).value();
      worst = std::fmax(worst, std::fabs(v - zab) / std::fabs(zab));
    }
    add(rep, "psi pairing equals Z_ab", worst <= 1e-8, worst, 1e-8);
  }
  {  // regularized splits agree
    ensemble::EnsembleParams p;
    p.m = 3;
    p.d = 1;
    p.a = 0.3;
    p.b = -0.1;
    const double g2 = ensemble::g_ab_u(p, 3.0, ensemble::GabMode::Regularized, 96);
    const double g2b = ensemble::g_ab_u(p, 3.0, ensemble::GabMode::RegularizedBis, 96);
    add(rep, "two regularized G^{a,b} splits agree", std::fabs(g2 - g2b) <= 1e-8, std::fabs(g2 - g2b),
        1e-8);
  }
  {  // S_{w,s} representations
    double worst = 0.0;
    for (double w : {0.25, 0.5, 1.0})
      for (double s : {-1.0, 1.0}) {
        auto fs = edge::limit_suite({w, s});
        worst = std::fmax(worst, std::fabs(fs.S - edge::s_negative_repr(w, s)));
      }
    add(rep, "both S_{w,s} representations", worst <= 1e-8, worst, 1e-8);
  }
  {  // g vs its alternative representation
    double worst = 0.0;
    const std::vector<double> ss = full ? std::vector<double>{-4.0, -2.0, 0.0, 2.0, 4.0}
                                        : std::vector<double>{0.0, 2.0};
    const std::vector<double> ws = full ? std::vector<double>{0.0, 0.25, 0.5, 1.0}
                                        : std::vector<double>{0.25, 1.0};
    for (double s : ss)
      for (double w : ws)
        worst = std::fmax(worst, std::fabs(edge::g_scaling(s, w) - edge::g_alt_repr(s, w)));
    add(rep, "g equals the half-line representation", worst <= 1e-7, worst, 1e-7);
  }

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// finite-size: exact theory against the Monte Carlo simulators.
// ---------------------------------------------------------------------------
inline SuiteReport finite_size_suite(bool full = false, std::uint64_t seed = 20260808ull) {
  using detail::add;
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = "finite-size";
  const long reps = full ? 1000000 : 200000;

  {  // factorization and continuation
    ensemble::EnsembleParams p;
    p.m = 3;
    p.d = 1;
    p.a = 0.2;
    p.b = 0.1;
    const double lhs = ensemble::rank_one_det(p, 4.0, 128);
    const double F = ensemble::f_u(p, 4.0, 96);
    const double G = ensemble::g_ab_u(p, 4.0, ensemble::GabMode::Direct, 96);
    add(rep, "det factorization (rank-one identity)", std::fabs(lhs - F * 0.3 * G) <= 1e-8,
        std::fabs(lhs - F * 0.3 * G), 1e-8);
    ensemble::EnsembleParams q = p;
    q.b = -q.a + 1e-4;
    const double g_eps = ensemble::g_ab_u(q, 4.0, ensemble::GabMode::Regularized, 96);
    const double g0 = ensemble::g0_u(p, 4.0, 96);
    add(rep, "continuation b -> -a reaches G_0", std::fabs(g_eps - g0) <= 1e-3, std::fabs(g_eps - g0),
        1e-3);
  }
  {  // stationary finite-size CDF vs the LPP simulator (criterion 5 shape)
    const double rho = 0.5;
    const int m = 3, n = 3;
    std::vector<double> grid;
    for (double u = 2.0; u <= 30.0 + 1e-9; u += 2.0) grid.push_back(u);
    auto exact = ensemble::stationary_cdf(rho, m, 0, grid, 72);
    lpp::LppConfig cfg;
    cfg.cols = m;
    cfg.rows = n;
    cfg.model = lpp::WeightModel::AbExponentialZeroCorner;
    cfg.a = 0.5 - rho;
    cfg.b = -(0.5 - rho);
    cfg.master_seed = seed;
    cfg.replicas = reps;
    struct Acc {
      std::vector<long> cnt;
      long n = 0;
    };
    auto chunks = parallel::run_replicas<Acc>(reps, 2048, [&](long r, Acc& acc) {
      if (acc.cnt.empty()) acc.cnt.assign(grid.size(), 0);
      const double g = lpp::last_passage(lpp::sample_weights(cfg, r)).at(m, n);
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (g <= grid[i]) acc.cnt[i]++;
      acc.n++;
    });
    std::vector<long> cnt(grid.size(), 0);
    long total = 0;
    for (const auto& a : chunks) {
      if (a.cnt.empty()) continue;
      for (std::size_t i = 0; i < grid.size(); ++i) cnt[i] += a.cnt[i];
      total += a.n;
    }
    double worst_sigma = 0.0, worst_abs = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = static_cast<double>(cnt[i]) / total;
      const double se = std::sqrt(std::fmax(p * (1.0 - p), 1e-9) / total);
      const double dev = std::fabs(p - exact.table.cdf[i]);
      worst_abs = std::fmax(worst_abs, dev);
      worst_sigma = std::fmax(worst_sigma, dev / se);
    }
    add(rep, "stationary cdf vs LPP MC (sigmas)", worst_sigma <= 3.0, worst_sigma, 3.0);
    (void)worst_abs;
  }
  {  // integrated-cdf consistency with the F G_0 product
    const double c1 = 5.0, c2 = 7.0;
    auto fg = [&](double u) {
      ensemble::EnsembleParams p;
      p.m = 3;
      p.d = 0;
      p.a = 0.0;
      return ensemble::f_u(p, u, 72) * ensemble::g0_u(p, u, 72);
    };
    auto cdf_at = [&](double u) {
      auto one = ensemble::stationary_cdf(0.5, 3, 0, {u, u + 0.01}, 72);
      return one.table.cdf[0];
    };
    const double integral = quad::integrate_segment(c1, c2, 12, cdf_at);
    const double diff = fg(c2) - fg(c1);
    add(rep, "integrated cdf equals F G_0 increment", std::fabs(integral - diff) <= 1e-6,
        std::fabs(integral - diff), 1e-6);
  }
  {  // one-point density vs the perturbed kernel diagonal (criterion 6 shape)
    ensemble::EnsembleParams p;
    p.m = 3;
    p.d = 0;
    p.a = 0.3;
    p.b = 0.3;
    auto drep = lpp::density_vs_kernel(p, reps, seed + 1);
    add(rep, "RSK density within 3 sigma of K^{a,b}", drep.worst_sigma <= 3.0 && drep.count_exact,
        drep.worst_sigma, 3.0);
  }
  {  // coupling of the two simulators + zeta bound
    auto crep = lpp::coupling_check(0.5, 3, 3, full ? 100000 : 30000, seed + 2);
    add(rep, "TASEP/LPP coupling gap (sigmas)", crep.max_gap_sigma <= 3.0, crep.max_gap_sigma, 3.0);
    auto zrep = lpp::zeta_bound_check(0.5, 4, 4, 1, 0, {1.0, 2.0, 4.0}, full ? 100000 : 30000, seed + 3);
    add(rep, "zeta coupling bound and monotonicity", zrep.within_bound && zrep.monotone_ok, 0.0, 0.0);
  }
  {  // stationarity signature: increments are Exp(1-rho) (statistical check)
    const double rho = 0.5;
    lpp::LppConfig cfg;
    cfg.cols = 12;
    cfg.rows = 12;
    cfg.model = lpp::WeightModel::AbExponentialZeroCorner;
    cfg.a = 0.5 - rho;
    cfg.b = -(0.5 - rho);
    cfg.master_seed = seed + 4;
    std::vector<double> inc;
    for (long r = 0; r < 20000; ++r) {
      auto g = lpp::last_passage(lpp::sample_weights(cfg, r));
      inc.push_back(g.at(12, 7) - g.at(11, 7));
    }
    auto ks = stats::ks_test(std::move(inc), [&](double x) { return 1.0 - std::exp(-(1.0 - rho) * x); });
    add(rep, "stationary increment law (KS p-value)", ks.p_value > 0.01, ks.p_value, 0.01);
  }

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// edge-convergence: the scaling limits as numerical convergence diagnostics.
// ---------------------------------------------------------------------------
inline SuiteReport edge_convergence_suite(bool full = false, std::uint64_t seed = 99887766ull) {
  using detail::add;
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = "edge-convergence";

  std::vector<long> Ns = full ? std::vector<long>{250, 1000, 4000} : std::vector<long>{250, 1000};
  {  // thmJo / thmG0 rates at (rho, w, s) = (1/2, 0, 0)
    const double targetF = edge::f_gue(0.0, 96);
    const double targetG = edge::g_scaling(0.0, 0.0, 96);
    std::vector<double> errF, errG;
    for (long N : Ns) {
      auto sm = ensemble::scaling_map_N(0.5, 0.0, 0.0, N);
      ensemble::EnsembleParams p;
      p.m = sm.m;
      p.d = sm.d;
      p.a = 0.0;
      const double kn = sm.kappa * std::cbrt(static_cast<double>(N));
      errF.push_back(std::fabs(ensemble::f_u(p, sm.u, 96) - targetF));
      errG.push_back(std::fabs(ensemble::g0_u(p, sm.u, 96) / kn - targetG));
    }
    auto fit = [&](const std::vector<double>& e) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < Ns.size(); ++i) {
        const double x = std::log(static_cast<double>(Ns[i])), y = std::log(e[i] + 1e-300);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double n = static_cast<double>(Ns.size());
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    const double expF = fit(errF), expG = fit(errG);
    // symmetric point: super-convergent (~N^{-2/3}); the bound demands <= -0.2
    add(rep, "F(u) edge rate exponent <= -0.2", expF <= -0.2 && errF.back() < errF.front(), expF, -0.2);
    add(rep, "G_0 edge rate exponent <= -0.2", expG <= -0.2 && errG.back() < errG.front(), expG, -0.2);
  }
  {  // H_N diagnostics
    std::vector<double> ys = {-1.0, 0.0, 1.0, 2.0};
    auto ra = ensemble::h_n_diagnostics(0.5, 0.0, 0.0, 250, ys);
    auto rb = ensemble::h_n_diagnostics(0.5, 0.0, 0.0, full ? 4000 : 1000, ys);
    const double ratio = rb.max_err_h / ra.max_err_h;
    const double expect = std::pow(static_cast<double>(full ? 4000 : 1000) / 250.0, -1.0 / 3.0);
    add(rep, "H_N error ratio consistent with N^{-1/3}", ratio > expect / 2.0 && ratio < expect * 2.0,
        ratio, expect);
    add(rep, "H_N decay envelope bounded", rb.envelope_sup < 5.0, rb.envelope_sup, 5.0);
    add(rep, "H~_N mirrored-contour route agreement", rb.route_diff <= 1e-6, rb.route_diff, 1e-6);
  }
  if (full) {  // sigma(t) scaling from the TASEP simulator
    auto sr = tasep::sigma_scaling(0.5, {125.0, 250.0, 500.0}, 20000, seed);
    add(rep, "sigma(t) exponent 2/3", std::fabs(sr.slope - 2.0 / 3.0) <= 0.05, sr.slope, 2.0 / 3.0);
    const double a0_hat = sr.prefactor_over_chi13 * std::sqrt(2.0);
    add(rep, "sigma prefactor (sqrt2-rescaled) near 2.0209", std::fabs(a0_hat - 2.0209) <= 0.2, a0_hat,
        2.0209);
  }

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace stasep::suites
