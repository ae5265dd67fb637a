#include <doctest.h>

#include <cmath>
#include <complex>

#include "stasep/contour.hpp"

using namespace stasep;
using cplx = std::complex<double>;

TEST_CASE("residue of 1/z on the unit circle") {
  auto v = contour::contour_integral([](cplx z) { return 1.0 / z; },
                                     contour::ContourPath::circle({0.0, 0.0}, 1.0), 64);
  CHECK(std::fabs(v.real()) <= 1e-12);
  CHECK(v.imag() == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("analytic integrand gives zero") {
  auto v = contour::contour_integral([](cplx z) { return z * z + 1.0; },
                                     contour::ContourPath::circle({0.3, -0.2}, 2.0), 64);
  CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("simple pole with analytic numerator") {
  const cplx a{0.4, 0.1};
  auto v = contour::contour_integral([&](cplx z) { return z * z / (z - a); },
                                     contour::ContourPath::circle(a, 0.7), 96);
  const cplx expect = cplx(0.0, 2.0 * M_PI) * a * a;
  CHECK(std::abs(v - expect) <= 1e-11);
}

TEST_CASE("double-pole integrals around w evaluate to -s and +s") {
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
  auto v1 = contour::contour_integral(f1, path, 128);
  auto v2 = contour::contour_integral(f2, path, 128);
  CHECK(std::fabs(v1.real() + s) <= 1e-10);
  CHECK(std::fabs(v1.imag()) <= 1e-10);
  CHECK(std::fabs(v2.real() - s) <= 1e-10);
  CHECK(std::fabs(v2.imag()) <= 1e-10);
}

TEST_CASE("non-finite integrand raises with the node location") {
  auto path = contour::ContourPath::circle({0.0, 0.0}, 1.0);
  auto f = [](cplx z) { return 1.0 / (z - 1.0); };  // pole sits on the path
  CHECK_THROWS_AS(contour::contour_integral(f, path, 64), std::runtime_error);
}

TEST_CASE("order precondition") {
  auto path = contour::ContourPath::circle({0.0, 0.0}, 1.0);
  CHECK_THROWS_AS(contour::contour_integral([](cplx z) { return z; }, path, 8), std::invalid_argument);
}
