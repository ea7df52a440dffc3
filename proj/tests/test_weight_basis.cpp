#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "orthoden/basis.hpp"
#include "orthoden/error.hpp"

using namespace orthoden;

namespace {

// <phi_j, phi_k>_gamma by tanh-sinh on the raw Jacobi weight, independent of
// the Gauss rules used inside the library.
double gram_entry(const OrthonormalBasis& b, std::size_t j, std::size_t k, double a, double bb) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double x, double xc) {
    // xc is the signed distance to the nearer endpoint (negative on the left)
    const double to_lo = xc < 0 ? -xc : 2.0 - xc;
    const double to_hi = xc < 0 ? 2.0 + xc : xc;
    const std::vector<double> phi = b.eval(std::clamp(x, -1.0, 1.0), std::max(j, k));
    return phi[j - 1] * phi[k - 1] * std::pow(to_hi, a) * std::pow(to_lo, bb);
  };
  return ts.integrate(f);
}

}  // namespace

TEST_SUITE("weight_basis") {
  TEST_CASE("weight validation") {
    CHECK_THROWS_AS(WeightFunction::jacobi(-0.5, 0.0), ValidationError);
    CHECK_THROWS_AS(WeightFunction::jacobi(0.0, -0.7), ValidationError);
    CHECK_THROWS_AS(WeightFunction::beta01(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(WeightFunction::tabulated({-1.0, 0.5}, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(WeightFunction::tabulated({-1.0, 1.0}, {1.0, -1.0}), ValidationError);
    const WeightFunction w = WeightFunction::jacobi(-0.25, -0.25);
    CHECK_THROWS_AS(w(1.5), ValidationError);
    CHECK(w(1.0) == 0.0);
    CHECK(w(0.0) == doctest::Approx(1.0));
    CHECK(w(0.5) == doctest::Approx(std::pow(0.5, -0.25) * std::pow(1.5, -0.25)));
  }

  TEST_CASE("weight constants against closed forms") {
    struct Row {
      double a, b, k, mass, c1, lambda;
    };
    // Beta-function closed forms evaluated in 30-digit arithmetic.
    const Row rows[] = {
        {-0.25, -0.25, 0.83462684167407319, 2.3962804694711844, 0.0, 1.0214125278713745},
        {-0.4, -0.4, 1.8021252631650449, 2.7745019184840558, 0.0, 0.89046904257959444},
        {0.0, 0.0, 0.5, 2.0, 0.0, 1.224744871391589},
        {0.5, -0.25, 0.75707276285094041, 2.2797390270697546, -0.33333333333333333, 1.2664130428633068},
        {-0.25, 0.0, 0.70183471923825771, 2.2423904406765721, 0.14285714285714286, 1.1188919558911587},
    };
    for (const Row& r : rows) {
      CAPTURE(r.a);
      CAPTURE(r.b);
      const WeightConstants c = weight_constants(WeightFunction::jacobi(r.a, r.b));
      CHECK(c.k_gamma == doctest::Approx(r.k).epsilon(1e-9));
      CHECK(c.mass == doctest::Approx(r.mass).epsilon(1e-9));
      CHECK(std::abs(c.c1 - r.c1) < 1e-9);
      CHECK(c.lambda == doctest::Approx(r.lambda).epsilon(1e-9));
      CHECK(c.c0 == doctest::Approx(1.0 / std::sqrt(r.mass)).epsilon(1e-9));
      const JacobiClosedForms cf = jacobi_closed_forms(r.a, r.b);
      CHECK(cf.k_gamma == doctest::Approx(r.k).epsilon(1e-12));
      CHECK(cf.k_gamma_text == doctest::Approx(2.0 * r.k).epsilon(1e-12));
      CHECK(cf.lambda_inv2 == doctest::Approx(1.0 / (r.lambda * r.lambda)).epsilon(1e-12));
    }
    // the polynomial-ratio lambda display gives 2 at a=b=0 where the variance is 2/3
    CHECK(jacobi_closed_forms(0.0, 0.0).lambda_inv2_text == doctest::Approx(2.0));
  }

  TEST_CASE("beta01 weight constants") {
    const WeightConstants c = weight_constants(WeightFunction::beta01(2.0, 3.0));
    CHECK(c.mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c.k_gamma == doctest::Approx(0.1875).epsilon(1e-9));
    CHECK(c.c1 == doctest::Approx(0.4).epsilon(1e-10));
  }

  TEST_CASE("legendre basis matches normalized Legendre polynomials") {
    const OrthonormalBasis b = build_basis(WeightFunction::jacobi(0.0, 0.0), 40);
    for (double x : {-1.0, -0.73, 0.0, 0.41, 0.999, 1.0}) {
      const std::vector<double> phi = b.eval(x, 40);
      for (unsigned k = 1; k <= 40; ++k) {
        const double ref = std::sqrt((2.0 * k - 1.0) / 2.0) * boost::math::legendre_p(static_cast<int>(k - 1), x);
        CHECK(phi[k - 1] == doctest::Approx(ref).epsilon(1e-11).scale(std::abs(ref) + 1.0));
      }
    }
  }

  TEST_CASE("orthonormality against an independent quadrature") {
    for (auto [a, bb] : {std::pair{-0.25, -0.25}, {0.5, 0.0}, {-0.4, 0.5}}) {
      const OrthonormalBasis b = build_basis(WeightFunction::jacobi(a, bb), 12);
      for (std::size_t j = 1; j <= 12; j += 3) {
        for (std::size_t k = j; k <= 12; k += 2) {
          CHECK(std::abs(gram_entry(b, j, k, a, bb) - (j == k ? 1.0 : 0.0)) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("degree and sign conventions") {
    const OrthonormalBasis b = build_basis(WeightFunction::jacobi(-0.25, 0.5), 5);
    CHECK(b.max_degree() == 5);
    CHECK(b.recurrence().size() == 4);
    const std::vector<double> at0 = b.eval(0.3, 5);
    CHECK(at0[0] == doctest::Approx(b.c0()));
    // phi_2 has positive leading coefficient and vanishes at C1
    const double c1 = b.constants().c1;
    CHECK(std::abs(b.eval(c1, 2)[1]) < 1e-12);
    CHECK(b.eval(1.0, 2)[1] > 0.0);
    CHECK_THROWS_AS(b.eval(0.0, 6), ValidationError);
    CHECK_THROWS_AS(b.eval(-1.01, 2), ValidationError);
  }

  TEST_CASE("tabulated constant weight reproduces the Legendre system") {
    const OrthonormalBasis t = build_basis(WeightFunction::tabulated({-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}), 15);
    const OrthonormalBasis l = build_basis(WeightFunction::jacobi(0.0, 0.0), 15);
    for (double x : {-0.9, -0.2, 0.6}) {
      const auto a = t.eval(x, 15), b = l.eval(x, 15);
      for (std::size_t k = 0; k < 15; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("series is the coefficient-weighted sum") {
    const OrthonormalBasis b = build_basis(WeightFunction::jacobi(-0.25, -0.25), 6);
    const std::vector<double> c{0.5, -1.0, 0.25};
    const auto phi = b.eval(0.37, 3);
    CHECK(b.series(0.37, c) == doctest::Approx(0.5 * phi[0] - phi[1] + 0.25 * phi[2]));
  }

  TEST_CASE("gamma_quadrature integrates against the weight") {
    const OrthonormalBasis b = build_basis(WeightFunction::jacobi(-0.25, -0.25), 4);
    CHECK(gamma_quadrature(b, [](double) { return 1.0; }) == doctest::Approx(b.constants().mass).epsilon(1e-10));
  }

  TEST_CASE("default cache size") { CHECK(default_max_degree(1000) == 666); }
}
