#ifndef ORTHODEN_STATS_HPP
#define ORTHODEN_STATS_HPP

#include <cstddef>
#include <span>

namespace orthoden::stats {

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> x);
/// Linear-interpolation quantile (type 7), p in [0, 1].
double quantile(std::span<const double> x, double p);
double median(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  ///< 0 when only two points
};

/// Ordinary least squares y = a + b x.
LinearFit ols(std::span<const double> x, std::span<const double> y);
/// OLS on (log x, log y).
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double lo = 0.0;  ///< Wilson score interval
  double hi = 0.0;
};

Proportion wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

double normal_cdf(double z);

struct NormalityTest {
  double statistic = 0.0;           ///< A^2 (1 + 0.75/n + 2.25/n^2)
  double critical_value = 1.035;    ///< 1% level, mean and variance estimated
  bool pass = false;
};

/// Anderson-Darling test of normality with estimated parameters.
NormalityTest anderson_darling(std::span<const double> x);

}  // namespace orthoden::stats

#endif  // ORTHODEN_STATS_HPP
