#include <doctest.h>

#include <cmath>

#include "stasep/airy.hpp"
#include "stasep/painleve.hpp"

using namespace stasep;

namespace {
const painleve::PainleveSolution& hm() {
  static const painleve::PainleveSolution sol = painleve::hastings_mcleod();
  return sol;
}

// s-direction system a' = q b, b' = q a - w b at fixed w (the consistency
// counterpart to the primary w-direction propagation).
painleve::BRState integrate_in_s(const painleve::PainleveSolution& sol, double s_from, double s_to,
                                 double w, painleve::BRState st) {
  const int steps = 4000;
  const double h = (s_to - s_from) / steps;
  auto rhs = [&](double s, double a, double b, double& da, double& db) {
    const double q = sol.q_at(s);
    da = q * b;
    db = q * a - w * b;
  };
  double s = s_from;
  for (int k = 0; k < steps; ++k) {
    double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(s, st.a, st.b, k1a, k1b);
    rhs(s + h / 2, st.a + h / 2 * k1a, st.b + h / 2 * k1b, k2a, k2b);
    rhs(s + h / 2, st.a + h / 2 * k2a, st.b + h / 2 * k2b, k3a, k3b);
    rhs(s + h, st.a + h * k3a, st.b + h * k3b, k4a, k4b);
    st.a += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
    st.b += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
    s += h;
  }
  return st;
}
}  // namespace

TEST_CASE("hastings-mcleod matches -Ai on the right") {
  CHECK(std::fabs(hm().q_at(8.0) + airy::airy_ai(8.0)) <= 1e-8);
  CHECK(std::fabs(hm().q_at(6.0) + airy::airy_ai(6.0)) <= 1e-8);
}

TEST_CASE("hastings-mcleod matches the parabola branch on the left") {
  const double v = hm().q_at(-10.0);
  CHECK(std::fabs(v + std::sqrt(5.0)) / std::sqrt(5.0) <= 0.02);
  for (double s = -12.0; s <= -8.0; s += 0.5) {
    const double ref = std::sqrt(-s / 2.0);
    CHECK(std::fabs(hm().q_at(s) + ref) / ref <= 0.02);
  }
}

TEST_CASE("sign condition holds") {
  for (double s = -12.0; s <= 10.0; s += 0.25) CHECK(hm().q_at(s) < 0.0);
}

TEST_CASE("painleve residual via independent finite differences") {
  const auto& sol = hm();
  const double h = sol.h;
  const int n = static_cast<int>(sol.q_values.size());
  double worst = 0.0;
  for (int i = 2; i < n - 2; ++i) {
    const double d2 = (-sol.q_values[i + 2] + 16 * sol.q_values[i + 1] - 30 * sol.q_values[i] +
                       16 * sol.q_values[i - 1] - sol.q_values[i - 2]) /
                      (12 * h * h);
    const double q = sol.q_values[i];
    worst = std::fmax(worst, std::fabs(d2 - 2 * q * q * q - sol.s_grid[i] * q));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("step-halving self-oracle at the origin") {
  const auto fine = painleve::hastings_mcleod(-12.0, 10.0, 1e-11, 0.0025);
  CHECK(std::fabs(hm().q_at(0.0) - fine.q_at(0.0)) <= 1e-8);
  CHECK(std::fabs(hm().q_at(-6.0) - fine.q_at(-6.0)) <= 1e-8);
}

TEST_CASE("asymptotic invariant |q + Ai| small for s >= 6") {
  for (double s = 6.0; s <= 10.0; s += 0.5)
    CHECK(std::fabs(hm().q_at(s) + airy::airy_ai(s)) <= 1e-6);
}

TEST_CASE("initial data a(s,0) = -b(s,0) = exp(int q)") {
  for (double s : {-4.0, 0.0, 4.0}) {
    auto st = painleve::br_functions(hm(), s, 0.0);
    const double expect = std::exp(hm().int_q_to_inf(s));
    CHECK(st.a == doctest::Approx(expect).epsilon(1e-12));
    CHECK(st.b == doctest::Approx(-expect).epsilon(1e-12));
  }
  // a -> 1 as s -> +inf (empty integral)
  auto st = painleve::br_functions(hm(), 9.5, 0.0);
  CHECK(st.a == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("path independence of the (A.4)/(A.5) systems") {
  // route 1: w-direction at s = 0
  auto direct = painleve::br_functions(hm(), 0.0, 0.5);
  // route 2: w-direction at s = 2, then s-direction from 2 to 0 at w = 0.5
  auto at2 = painleve::br_functions(hm(), 2.0, 0.5);
  auto routed = integrate_in_s(hm(), 2.0, 0.0, 0.5, at2);
  CHECK(std::fabs(direct.a - routed.a) <= 1e-7);
  CHECK(std::fabs(direct.b - routed.b) <= 1e-7);
}

TEST_CASE("g_br derivative identity d/ds g = a(s,w) a(s,-w)") {
  const double s = 0.5, w = 0.7, h = 1e-3;
  const double lhs = (painleve::g_br(hm(), s + h, w) - painleve::g_br(hm(), s - h, w)) / (2 * h);
  auto p = painleve::br_functions(hm(), s, w);
  auto m = painleve::br_functions(hm(), s, -w);
  CHECK(std::fabs(lhs - p.a * m.a) <= 1e-7);
}

TEST_CASE("g_br is even in w") {
  CHECK(painleve::g_br(hm(), 1.0, 0.6) == doctest::Approx(painleve::g_br(hm(), 1.0, -0.6)).epsilon(1e-12));
}

TEST_CASE("painleve tracy-widom tails") {
  CHECK(painleve::f_gue_painleve(hm(), 6.0) >= 1.0 - 1e-7);
  CHECK(painleve::f_gue_painleve(hm(), -8.0) <= 1e-4);
}

TEST_CASE("f0 moments: mean zero") {
  auto [m0, v0] = painleve::f0_moments(hm(), 0.0);
  CHECK(std::fabs(m0) <= 1e-3);
  CHECK(v0 > 0.5);
  CHECK(v0 < 2.5);
  auto [m5, v5] = painleve::f0_moments(hm(), 0.5);
  CHECK(std::fabs(m5) <= 1e-3);
  CHECK(v5 > v0);  // variance grows with |w|
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(painleve::hastings_mcleod(-13.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(painleve::br_functions(hm(), 0.0, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(painleve::f_gue_painleve(hm(), 10.5), std::invalid_argument);
}
