#include "orthoden/denoise.hpp"

#include <cmath>

#include "orthoden/error.hpp"

namespace orthoden {

std::string_view to_string(VarianceMode m) { return m == VarianceMode::paper ? "paper" : "exact-design"; }

VarianceMode parse_variance_mode(std::string_view text) {
  if (text == "paper") return VarianceMode::paper;
  if (text == "exact-design" || text == "exact") return VarianceMode::exact_design;
  throw ValidationError("unknown variance mode '" + std::string(text) + "'");
}

double tau(const CoefficientSet& c, std::size_t big_n) {
  if (big_n == 0 || 2 * big_n > c.k_max()) {
    throw ValidationError("tau window (" + std::to_string(big_n) + ", " + std::to_string(2 * big_n) +
                          "] exceeds the " + std::to_string(c.k_max()) + " available coefficients");
  }
  double acc = 0.0;
  for (std::size_t k = big_n + 1; k <= 2 * big_n; ++k) acc += c.values[k - 1] * c.values[k - 1];
  return acc;
}

OrderSelection select_order(const CoefficientSet& c, std::size_t n) {
  if (n < kMinSampleSize) throw ValidationError("select_order: n=" + std::to_string(n) + " is below 15");
  const std::size_t n_hi = n / 3;
  if (c.k_max() < 2 * n_hi) {
    throw ValidationError("select_order: needs 2*floor(n/3)=" + std::to_string(2 * n_hi) + " coefficients, got " +
                          std::to_string(c.k_max()));
  }
  std::vector<long double> prefix(2 * n_hi + 1, 0.0L);
  for (std::size_t k = 1; k <= 2 * n_hi; ++k) {
    const long double v = c.values[k - 1];
    prefix[k] = prefix[k - 1] + v * v;
  }
  OrderSelection sel;
  sel.tau_curve.resize(n_hi);
  sel.m_n = 1;
  for (std::size_t big_n = 1; big_n <= n_hi; ++big_n) {
    const double t = static_cast<double>(prefix[2 * big_n] - prefix[big_n]);
    sel.tau_curve[big_n - 1] = t;
    if (t < sel.tau_curve[sel.m_n - 1]) sel.m_n = big_n;
  }
  sel.tau_star = sel.tau_curve[sel.m_n - 1];
  return sel;
}

DenoiseResult denoise_from_coefficients(const SampledSignal& s, const OrthonormalBasis& basis,
                                        const CoefficientSet& full, const DenoiseOptions& opts) {
  const std::size_t n = s.size();
  const OrderSelection sel = select_order(full, n);
  DenoiseResult r;
  r.n = n;
  r.m_n = sel.m_n;
  r.tau_star = sel.tau_star;
  r.mode = opts.mode;
  r.normalization = opts.normalization;
  r.k_gamma = basis.constants().k_gamma;
  r.coeffs = full;
  r.coeffs.values.resize(sel.m_n);
  const std::vector<double> v = design_variances(basis, s.grid, 2 * sel.m_n);
  r.noise_factors.resize(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) r.noise_factors[k] = full.scale * full.scale * v[k];
  r.sigma2_n = estimate_sigma2(s, r, basis);
  if (!std::isfinite(r.sigma2_n) || !std::isfinite(r.tau_star)) {
    throw NumericalError("denoise: non-finite estimate (observations too large?)");
  }
  return r;
}

DenoiseResult denoise(const SampledSignal& s, const OrthonormalBasis& basis, const DenoiseOptions& opts) {
  const std::size_t n = s.size();
  if (n < kMinSampleSize) throw ValidationError("denoise: n=" + std::to_string(n) + " is below 15");
  const std::size_t cap = coefficient_cap(n);
  if (basis.max_degree() < cap) {
    throw ValidationError("denoise: basis holds " + std::to_string(basis.max_degree()) +
                          " functions, 2*floor(n/3)=" + std::to_string(cap) + " are needed");
  }
  const CoefficientSet full = empirical_coefficients(s, basis, cap, opts.normalization);
  return denoise_from_coefficients(s, basis, full, opts);
}

double eval_estimate(const DenoiseResult& r, const OrthonormalBasis& basis, double x) {
  if (!basis.weight().domain().contains(x)) {
    throw ValidationError("eval_estimate: x=" + std::to_string(x) + " outside the domain");
  }
  return basis.series(x, r.coeffs.values);
}

double estimate_sigma2(const SampledSignal& s, const DenoiseResult& r, const OrthonormalBasis& basis) {
  const std::size_t n = s.size();
  if (n <= r.m_n + 1) {
    throw NumericalError("estimate_sigma2: degenerate denominator n - M(n) - 1 = " +
                         std::to_string(static_cast<long long>(n) - static_cast<long long>(r.m_n) - 1));
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = basis.series(s.grid.points[i], r.coeffs.values) - s.xi[i];
    rss += d * d;
  }
  return rss / static_cast<double>(n - r.m_n - 1);
}

OracleReport oracle_curve(std::span<const double> truth, std::size_t n) {
  if (n < kMinSampleSize) throw ValidationError("oracle_curve: n below 15");
  const std::size_t n_hi = n / 3;
  // rho(N) for N = 0..n_hi from the back.
  std::vector<double> rho(n_hi + 1, 0.0);
  double tail = 0.0;
  for (std::size_t k = truth.size(); k > n_hi; --k) tail += truth[k - 1] * truth[k - 1];
  rho[n_hi] = tail;
  for (std::size_t big_n = n_hi; big_n > 0; --big_n) {
    const double c = big_n <= truth.size() ? truth[big_n - 1] : 0.0;
    rho[big_n - 1] = rho[big_n] + c * c;
  }
  OracleReport rep;
  rep.a_curve.resize(n_hi);
  rep.n0 = 1;
  for (std::size_t big_n = 1; big_n <= n_hi; ++big_n) {
    rep.a_curve[big_n - 1] = rho[big_n] + static_cast<double>(big_n) / static_cast<double>(n);
    if (rep.a_curve[big_n - 1] < rep.a_curve[rep.n0 - 1]) rep.n0 = big_n;
  }
  rep.a_star = rep.a_curve[rep.n0 - 1];
  rep.n0_over_sqrt_n = static_cast<double>(rep.n0) / std::sqrt(static_cast<double>(n));
  return rep;
}

}  // namespace orthoden
