#include <doctest.h>

#include <cmath>
#include <complex>

#include "stasep/airy.hpp"
#include "stasep/contour.hpp"

using namespace stasep;
using cplx = std::complex<double>;

namespace {

// Independent Maclaurin oracle: explicit factorial sums, 50 terms.
double ai_maclaurin_oracle(double x) {
  const double c1 = 0.35502805388781723926;
  const double c2 = 0.25881940379280679840;
  double f = 0.0, g = 0.0;
  for (int k = 0; k < 50; ++k) {
    double num = 1.0;
    for (int j = 0; j < k; ++j) num *= (3.0 * j + 1.0);
    double den = 1.0;
    for (int j = 1; j <= 3 * k; ++j) den *= j;
    f += num * std::pow(x, 3 * k) / den;
    double numg = 1.0;
    for (int j = 0; j < k; ++j) numg *= (3.0 * j + 2.0);
    double deng = den * (3.0 * k + 1.0);
    g += numg * std::pow(x, 3 * k + 1) / deng;
  }
  return c1 * f - c2 * g;
}

// Independent contour oracle. For x > 0.5 the wedge representation through
// the saddle sqrt(x); otherwise a vertical line placed to keep the integrand
// magnitude small enough that cancellation stays below the tolerance.
double ai_contour_oracle(double x) {
  if (x > 0.5) {
    const double mu = std::sqrt(std::fmax(x, 1.0));
    const double extent = 7.0 + 2.0 * std::sqrt(std::fabs(x));
    auto path = contour::ContourPath::wedge(mu, extent);
    auto f = [&](cplx z) { return std::exp(z * z * z / 3.0 - x * z); };
    cplx v = contour_integral(f, path, 900) / cplx(0.0, 2.0 * M_PI);
    return v.real();
  }
  const double sigma = -std::fmin(1.5, 11.0 / std::fmax(1.0, std::fabs(x)));
  const double extent = std::sqrt(42.0 / std::fabs(sigma));
  const int panels = static_cast<int>(std::ceil(2.0 * extent / 0.12));
  auto path = contour::ContourPath::vertical_line(sigma, extent);
  auto f = [&](cplx z) { return std::exp(-z * z * z / 3.0 + x * z); };
  cplx v = contour_integral(f, path, panels * 24) / cplx(0.0, 2.0 * M_PI);
  return v.real();
}

}  // namespace

TEST_CASE("airy at zero against the series oracle") {
  CHECK(airy::airy_ai(0.0) == doctest::Approx(0.3550280538878172).epsilon(1e-13));
  CHECK(airy::airy_ai_prime(0.0) == doctest::Approx(-0.2588194037928068).epsilon(1e-13));
  for (double x : {-1.5, -0.3, 0.4, 1.0, 2.0}) {
    CHECK(airy::airy_ai(x) == doctest::Approx(ai_maclaurin_oracle(x)).epsilon(1e-12));
  }
}

TEST_CASE("superexponential right tail") {
  const double v = airy::airy_ai(30.0);
  CHECK(v < 1e-40);
  CHECK(v > 0.0);
  // one-term asymptotic oracle
  const double zeta = 2.0 / 3.0 * std::pow(30.0, 1.5);
  const double lead = std::exp(-zeta) / (2.0 * std::sqrt(M_PI) * std::pow(30.0, 0.25));
  CHECK(v == doctest::Approx(lead).epsilon(1e-2));
}

TEST_CASE("airy differential equation residual via finite differences") {
  const double h = 0.01;
  auto residual = [&](double x) {
    double d2 = (-airy::airy_ai(x + 2 * h) + 16 * airy::airy_ai(x + h) - 30 * airy::airy_ai(x) +
                 16 * airy::airy_ai(x - h) - airy::airy_ai(x - 2 * h)) /
                (12 * h * h);
    return std::fabs(d2 - x * airy::airy_ai(x));
  };
  CHECK(residual(1.0) <= 1e-6);
  for (double x = -10.0; x <= 5.0 + 1e-9; x += 0.5) CHECK(residual(x) <= 1e-6);
}

TEST_CASE("airy against the contour representation across the whole range") {
  for (double x : {-19.5, -15.0, -9.3, -5.0, -2.6, -1.0, 0.7, 2.5, 4.5, 8.0, 12.0, 14.5}) {
    const double ref = ai_contour_oracle(x);
    const double scale = std::fmax(std::fabs(ref), 1e-3);
    CHECK(std::fabs(airy::airy_ai(x) - ref) <= 1e-10 * scale);
  }
}

TEST_CASE("branch seams agree") {
  // same x, different evaluation branches
  for (double x : {2.21, 2.5, -2.21, -2.5, -3.0}) {
    const double table_route = airy::ai_all(x).ai;  // dispatches to anchor table at |x|>2.2
    const double series_route = airy::detail::series(x).ai;
    CHECK(std::fabs(table_route - series_route) <= 1e-11 * std::fmax(std::fabs(series_route), 1e-3));
  }
  for (double x : {13.9, 14.1}) {
    const double v = airy::ai_all(x).ai;
    const double asym = airy::detail::asymptotic(x).ai;
    CHECK(std::fabs(v - asym) <= 1e-11 * std::fabs(asym));
  }
}

TEST_CASE("oscillatory regime relative accuracy holds to -20") {
  for (double x : {-12.0, -16.0, -20.0}) {
    const double ref = ai_contour_oracle(x);
    CHECK(std::fabs(airy::airy_ai(x) - ref) <= 1e-10 * std::fabs(ref) + 1e-14);
  }
}

TEST_CASE("domain preconditions") {
  CHECK_THROWS_AS(airy::airy_ai(-20.5), std::invalid_argument);
  CHECK_THROWS_AS(airy::airy_ai(200.5), std::invalid_argument);
  CHECK_THROWS_AS(airy::airy_ai_prime(-21.0), std::invalid_argument);
}

TEST_CASE("exponential-moment identity for the airy function") {
  // Int e^{w y} Ai(beta+y) dy = e^{w^3/3 - beta w}
  CHECK(airy::airy_identity_check(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(airy::airy_identity_check(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(airy::airy_identity_check(1.0, 0.0) == doctest::Approx(std::exp(1.0 / 3.0)).epsilon(1e-8));
  CHECK(airy::airy_identity_check(0.5, 2.0) == doctest::Approx(std::exp(1.0 / 24.0 - 1.0)).epsilon(1e-8));
  for (double w : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    for (double beta : {-1.0, 0.0, 1.0, 3.0}) {
      const double expect = std::exp(w * w * w / 3.0 - beta * w);
      CHECK(std::fabs(airy::airy_identity_check(w, beta) - expect) <= 1e-8 * std::fmax(1.0, expect));
    }
  }
}
