#include <doctest.h>

#include <cmath>

#include "stasep/quadrature.hpp"

using namespace stasep;

TEST_CASE("gauss-legendre order 2 solves the two-point moment equations") {
  const auto& r = quad::gauss_legendre(2);
  CHECK(r.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gauss-legendre exactness on monomials up to 2n-1") {
  for (int order : {2, 4, 8, 16, 32, 64, 128, 256}) {
    const auto& r = quad::gauss_legendre(order);
    for (int k = 0; k <= 2 * order - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < order; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
      const double scale = 2.0 / (k + 1.0);
      CHECK(std::fabs(s - exact) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("constant integrates to interval length") {
  for (int order : {2, 7, 40, 200}) {
    double s = quad::integrate(quad::gauss_legendre(order), [](double) { return 1.0; });
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("odd high-degree monomial vanishes") {
  double s = quad::integrate(quad::gauss_legendre(40), [](double x) { return std::pow(x, 79); });
  CHECK(std::fabs(s) <= 1e-13);
}

TEST_CASE("order range enforced") {
  CHECK_THROWS_AS(quad::gauss_legendre(1), std::invalid_argument);
  CHECK_THROWS_AS(quad::gauss_legendre(513), std::invalid_argument);
}

TEST_CASE("half-line rule integrates exponentials") {
  double s = quad::integrate_halfline(0.0, 4.0, 64, [](double x) { return std::exp(-x); });
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  double s2 = quad::integrate_halfline(2.0, 4.0, 64, [](double x) { return std::exp(-x); });
  CHECK(s2 == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  double s3 = quad::integrate_halfline(0.0, 2.0, 96, [](double x) { return x * x * std::exp(-2.0 * x); });
  CHECK(s3 == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("panel sweep handles oscillation") {
  double s = quad::integrate_panels(0.0, 20.0 * M_PI, 1.0, 16, [](double x) { return std::sin(x); });
  CHECK(std::fabs(s) <= 1e-12);
}
