#include <doctest.h>

#include <cmath>

#include "stasep/airy_edge.hpp"
#include "stasep/painleve.hpp"

using namespace stasep;

namespace {
const painleve::PainleveSolution& hm() {
  static const painleve::PainleveSolution sol = painleve::hastings_mcleod();
  return sol;
}
}  // namespace

TEST_CASE("airy kernel symmetry and closed-form vs defining integral") {
  auto k = edge::airy_kernel(0.4);
  const double pts[][2] = {{0.1, 0.9}, {1.3, 2.2}, {0.0, 0.0}, {2.0, 0.3}, {0.5, 0.50001}};
  for (auto& p : pts) {
    CHECK(k.evaluate(p[0], p[1]) == doctest::Approx(k.evaluate(p[1], p[0])).epsilon(1e-12));
    CHECK(std::fabs(k.evaluate(p[0], p[1]) - edge::airy_kernel_integral(0.4, p[0], p[1])) <= 1e-9);
  }
  // K_{Ai,0}(0,0) two routes
  CHECK(std::fabs(edge::airy_kernel_point(0.0, 0.0, 0.0) - edge::airy_kernel_integral(0.0, 0.0, 0.0)) <=
        1e-9);
  // superexponential decay of the diagonal
  CHECK(std::fabs(edge::airy_kernel_point(5.0, 10.0, 10.0)) < 1e-12);
}

TEST_CASE("airy kernel shift parameter validated") {
  CHECK_THROWS_AS(edge::airy_kernel(10.5), std::invalid_argument);
}

TEST_CASE("f_gue tails and cross-stack anchor") {
  CHECK(edge::f_gue(6.0) >= 1.0 - 1e-6);
  CHECK(edge::f_gue(-8.0) <= 1e-4);
  CHECK(std::fabs(edge::f_gue(0.0) - painleve::f_gue_painleve(hm(), 0.0)) <= 1e-7);
  CHECK(std::fabs(edge::f_gue(-4.0) - painleve::f_gue_painleve(hm(), -4.0)) <= 1e-7);
  CHECK(std::fabs(edge::f_gue(2.0) - painleve::f_gue_painleve(hm(), 2.0)) <= 1e-7);
}

TEST_CASE("order-doubling self-convergence of the GUE determinant") {
  for (double s : {-6.0, -3.0, 0.0, 3.0}) {
    CHECK(std::fabs(edge::f_gue(s, 64) - edge::f_gue(s, 128)) <= 1e-9);
  }
}

TEST_CASE("determinant nondecreasing in the left endpoint") {
  auto k = edge::airy_kernel(0.0);
  double prev = -1.0;
  for (double u : {-2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
    // shift kernel by u: det(1-P_u K_{Ai,0} P_u) = F_GUE evaluated at u
    double d = fredholm::determinant(fredholm::discretize(k, u, 64, edge::detail::airy_decay_scale(u)));
    CHECK(d >= prev - 1e-10);
    prev = d;
  }
}

TEST_CASE("spectral radius guardrail") {
  // top eigenvalue of K_{Ai,s} on [0,inf) climbs toward 1 as s decreases
  auto op0 = fredholm::discretize(edge::airy_kernel(0.0), 0.0, 48);
  const double r0 = fredholm::spectral_radius(op0);
  CHECK(r0 < 1.0);
  CHECK(r0 == doctest::Approx(0.0306).epsilon(0.05));  // 1 - F_GUE(0) to leading order
  auto op6 = fredholm::discretize(edge::airy_kernel(-6.0), 0.0, 64);
  const double r6 = fredholm::spectral_radius(op6);
  CHECK(r6 < 1.0);
  CHECK(r6 > 0.9);
}

TEST_CASE("both S_{w,s} representations agree") {
  for (double w : {0.25, 0.5, 1.0}) {
    for (double s : {-1.0, 0.5, 1.0}) {
      auto fs = edge::limit_suite({w, s});
      CHECK(std::fabs(fs.S - edge::s_negative_repr(w, s)) <= 1e-8);
    }
  }
}

TEST_CASE("phi reduces to the airy function at w=0") {
  auto fs = edge::limit_suite({0.0, 1.3});
  for (double z : {-1.0, 0.0, 2.0}) CHECK(fs.phi(z) == doctest::Approx(airy::airy_ai(1.3 + z)).epsilon(1e-13));
}

TEST_CASE("half-line splitting identity for phi at w=0.5") {
  // 1 - Int_{R+} phi(x+y) dx = Int_{R-} phi(x+y) dx
  const double w = 0.5, s = 0.7;
  auto fs = edge::limit_suite({w, s});
  for (double y : {0.0, 0.8, 2.5}) {
    double right = quad::integrate_panels(0.0, 40.0, 0.5, 16, [&](double x) { return fs.phi(x + y); });
    double left = quad::integrate_panels(-90.0, 0.0, 0.5, 16, [&](double x) { return fs.phi(x + y); });
    CHECK(std::fabs((1.0 - right) - left) <= 1e-8);
  }
}

TEST_CASE("Psi square-integrability tails") {
  auto fs = edge::limit_suite({0.5, 0.0});
  double tail = quad::integrate_panels(20.0, 60.0, 1.0, 8, [&](double x) { return fs.Psi(x) * fs.Psi(x); });
  CHECK(tail < 1e-8);
  auto fs0 = edge::limit_suite({0.0, 0.0});
  double tail0 = quad::integrate_panels(20.0, 60.0, 1.0, 8, [&](double x) {
    const double d = fs0.Psi(x) - 1.0;
    return d * d;
  });
  CHECK(tail0 < 1e-8);
}

TEST_CASE("section-1 hat functions match their defining integrals") {
  const double w = 0.5, s = 0.3;
  auto fs = edge::limit_suite({w, s});
  for (double y : {0.2, 1.1}) {
    double direct = quad::integrate_panels(-80.0, 0.0, 0.5, 16,
                                           [&](double z) { return std::exp(w * z) * airy::ai_all(y + z + s).ai; });
    CHECK(std::fabs(fs.Psi_hat(y) - direct) <= 1e-9);
  }
  for (double x : {0.4, 1.5}) {
    double direct = std::exp(w * s) * quad::integrate_panels(-60.0, 0.0, 0.25, 16, [&](double z) {
                      return std::exp(w * z) * edge::airy_kernel_point(s, z, x);
                    });
    CHECK(std::fabs(fs.Phi_hat(x) - direct) <= 1e-7);
  }
}

TEST_CASE("g is even in w by construction") {
  CHECK(edge::g_scaling(0.5, 0.75) == edge::g_scaling(0.5, -0.75));
}

TEST_CASE("g matches the painleve oracle") {
  CHECK(std::fabs(edge::g_scaling(0.0, 0.5) - painleve::g_br(hm(), 0.0, 0.5)) <= 1e-4);
  CHECK(std::fabs(edge::g_scaling(1.0, 0.0) - painleve::g_br(hm(), 1.0, 0.0)) <= 1e-4);
  CHECK(std::fabs(edge::g_scaling(-2.0, 1.0) - painleve::g_br(hm(), -2.0, 1.0)) <= 1e-4);
}

TEST_CASE("alternative representation equals the primary one") {
  CHECK(std::fabs(edge::g_alt_repr(0.0, 1.0) - edge::g_scaling(0.0, 1.0)) <= 1e-7);
  CHECK(std::fabs(edge::g_alt_repr(2.0, 0.25) - edge::g_scaling(2.0, 0.25)) <= 1e-7);
  CHECK(std::fabs(edge::g_alt_repr(1.0, 0.0) - edge::g_scaling(1.0, 0.0)) <= 1e-7);
  const double v = edge::g_alt_repr(-3.0, 0.5);
  CHECK(std::isfinite(v));
  CHECK(std::fabs(v - painleve::g_br(hm(), -3.0, 0.5)) <= 1e-4);
}

TEST_CASE("derivative identity dg/ds = a(s,w) a(s,-w)") {
  const double s = 0.4, w = 0.5, h = 5e-3;
  const double dg = (edge::g_scaling(s + h, w) - edge::g_scaling(s - h, w)) / (2.0 * h);
  auto p = painleve::br_functions(hm(), s, w);
  auto m = painleve::br_functions(hm(), s, -w);
  CHECK(std::fabs(dg - p.a * m.a) <= 1e-4);
}

TEST_CASE("f_w_table invariants and mean zero") {
  std::vector<double> grid;
  for (double s = -8.0; s <= 6.0 + 1e-9; s += 0.1) grid.push_back(s);
  auto t = edge::f_w_table(0.5, grid);
  table::validate(t);
  CHECK(std::fabs(table::mean(t)) <= 1e-3);
  auto tm = edge::f_w_table(-0.5, grid);
  for (std::size_t i = 0; i < t.cdf.size(); ++i) CHECK(t.cdf[i] == tm.cdf[i]);
}

TEST_CASE("f_w_table rejects bad grids") {
  CHECK_THROWS_AS(edge::f_w_table(0.0, {0.0, 0.2}), std::invalid_argument);      // spacing > 0.1
  CHECK_THROWS_AS(edge::f_w_table(0.0, {-9.0, -8.9}), std::invalid_argument);    // outside range
  CHECK_THROWS_AS(edge::f_w_table(0.0, {0.1, 0.05}), std::invalid_argument);     // not increasing
}
