#include "orthoden/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "orthoden/error.hpp"

namespace orthoden::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw ValidationError("mean of an empty sample");
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("stddev needs at least 2 values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile(std::span<const double> x, double p) {
  if (x.empty()) throw ValidationError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double h = p * static_cast<double>(s.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("ols needs >= 2 paired points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("ols: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_se = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  }
  return f;
}

LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw ValidationError("loglog_fit: x must be positive");
    lx[i] = std::log(x[i]);
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw ValidationError("loglog_fit: y must be positive");
    ly[i] = std::log(y[i]);
  }
  return ols(lx, ly);
}

Proportion wilson(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0 || successes > trials) throw ValidationError("wilson: invalid counts");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  p.estimate = ph;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  p.lo = std::max(0.0, centre - half);
  p.hi = std::min(1.0, centre + half);
  return p;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

NormalityTest anderson_darling(std::span<const double> x) {
  if (x.size() < 8) throw ValidationError("anderson_darling needs at least 8 values");
  const double m = mean(x), s = stddev(x);
  if (!(s > 0.0)) throw ValidationError("anderson_darling: zero spread");
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m) / s;
  std::sort(z.begin(), z.end());
  const boost::math::normal_distribution<double> nd;
  const std::size_t n = z.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lcdf = std::log(boost::math::cdf(nd, z[i]));
    const double lsf = std::log(boost::math::cdf(boost::math::complement(nd, z[n - 1 - i])));
    acc += static_cast<double>(2 * i + 1) * (lcdf + lsf);
  }
  const double nn = static_cast<double>(n);
  const double a2 = -nn - acc / nn;
  NormalityTest t;
  t.statistic = a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
  t.pass = t.statistic < t.critical_value;
  return t;
}

}  // namespace orthoden::stats
