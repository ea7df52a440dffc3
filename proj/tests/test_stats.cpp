#include "doctest.h"

#include <cmath>
#include <random>

#include "orthoden/error.hpp"
#include "orthoden/stats.hpp"

using namespace orthoden;

TEST_SUITE("stats") {
  TEST_CASE("moments and quantiles") {
    const std::vector<double> x{4.0, 1.0, 3.0, 2.0};
    CHECK(stats::mean(x) == doctest::Approx(2.5));
    CHECK(stats::stddev(x) == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(stats::median(x) == doctest::Approx(2.5));
    CHECK(stats::quantile(x, 0.0) == 1.0);
    CHECK(stats::quantile(x, 1.0) == 4.0);
    // type 7: h = (n - 1) p = 0.3, so 1 + 0.3 (2 - 1)
    CHECK(stats::quantile(x, 0.1) == doctest::Approx(1.3));
  }

  TEST_CASE("least squares") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2.1, 3.9, 6.2, 7.8, 10.1};
    const stats::LinearFit f = stats::ols(x, y);
    CHECK(f.slope == doctest::Approx(1.99));
    CHECK(f.intercept == doctest::Approx(0.05));
    // residual SS 0.107, s^2 = 0.107/3, Sxx = 10
    CHECK(f.slope_se == doctest::Approx(std::sqrt(0.107 / 3.0 / 10.0)));
    const std::vector<double> n{1000, 4000, 16000};
    const std::vector<double> e{std::pow(1000.0, -0.5), std::pow(4000.0, -0.5), std::pow(16000.0, -0.5)};
    CHECK(stats::loglog_fit(n, e).slope == doctest::Approx(-0.5));
  }

  TEST_CASE("wilson interval") {
    const stats::Proportion p = stats::wilson(90, 100);
    CHECK(p.estimate == doctest::Approx(0.9));
    CHECK(p.lo == doctest::Approx(0.8256).epsilon(1e-3));
    CHECK(p.hi == doctest::Approx(0.9448).epsilon(1e-3));
    const stats::Proportion all = stats::wilson(10, 10);
    CHECK(all.hi == doctest::Approx(1.0));
  }

  TEST_CASE("normal cdf") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::normal_cdf(1.959963984540054) == doctest::Approx(0.975));
  }

  TEST_CASE("anderson darling separates normal from exponential") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z;
    std::exponential_distribution<double> ex;
    std::vector<double> a(500), b(500);
    for (double& v : a) v = z(rng);
    for (double& v : b) v = ex(rng);
    CHECK(stats::anderson_darling(a).pass);
    const stats::NormalityTest t = stats::anderson_darling(b);
    CHECK_FALSE(t.pass);
    CHECK(t.statistic > 5.0);
  }
}
