#include "doctest.h"

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "orthoden/error.hpp"
#include "orthoden/quadrature.hpp"

using namespace orthoden;

TEST_SUITE("quadrature") {
  TEST_CASE("gauss-legendre is exact for polynomials up to degree 2m-1") {
    const QuadratureRule r = gauss_legendre(6, -1.0, 1.0);
    CHECK(r.size() == 6);
    for (int p = 0; p <= 11; ++p) {
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(r.apply([p](double x) { return std::pow(x, p); }) == doctest::Approx(exact).epsilon(1e-13));
    }
  }

  TEST_CASE("gauss-legendre on a shifted interval") {
    const QuadratureRule r = gauss_legendre(8, 0.0, 3.0);
    CHECK(r.apply([](double x) { return x * x; }) == doctest::Approx(9.0).epsilon(1e-13));
  }

  TEST_CASE("gauss-jacobi weights sum to the jacobi mass") {
    for (auto [a, b] : {std::pair{-0.25, -0.25}, {0.5, -0.4}, {0.0, 0.0}}) {
      const QuadratureRule r = gauss_jacobi(40, a, b);
      const double mass = std::pow(2.0, a + b + 1) * boost::math::beta(a + 1, b + 1);
      CHECK(r.apply([](double) { return 1.0; }) == doctest::Approx(mass).epsilon(1e-12));
      // first moment: mass * (b - a) / (a + b + 2)
      CHECK(r.apply([](double x) { return x; }) == doctest::Approx(mass * (b - a) / (a + b + 2)).epsilon(1e-12));
    }
  }

  TEST_CASE("gauss nodes are increasing and inside the interval") {
    const QuadratureRule r = gauss_jacobi(200, -0.4, 0.3);
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(std::abs(r.nodes[i]) < 1.0);
      CHECK(r.weights[i] > 0.0);
      if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
  }

  TEST_CASE("integrate_singular handles algebraic endpoint singularities") {
    // int_{-1}^{1} (1-x)^-0.4 (1+x)^-0.4 dx = 2^0.2 B(0.6, 0.6)
    const double v = integrate_singular(
        [](double, double lo, double hi) { return std::pow(lo, -0.4) * std::pow(hi, -0.4); }, -1.0, 1.0);
    CHECK(v == doctest::Approx(std::pow(2.0, 0.2) * boost::math::beta(0.6, 0.6)).epsilon(1e-11));
  }

  TEST_CASE("integrate_singular rejects non-finite integrands") {
    CHECK_THROWS_AS(integrate_singular([](double, double, double) { return std::nan(""); }, -1.0, 1.0),
                    NumericalError);
  }
}
