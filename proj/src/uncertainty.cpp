#include "orthoden/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "orthoden/error.hpp"

namespace orthoden {

double variance_constant(const DenoiseResult& r) {
  if (r.mode == VarianceMode::paper) return r.k_gamma * r.k_gamma;
  if (r.noise_factors.size() < 2 * r.m_n) throw ValidationError("denoise result lacks noise factors");
  double acc = 0.0;
  for (std::size_t k = r.m_n; k < 2 * r.m_n; ++k) acc += r.noise_factors[k];
  return acc / static_cast<double>(r.m_n);
}

double estimate_tail(const DenoiseResult& r, double k_const) {
  const double noise = r.sigma2_n * k_const * k_const * static_cast<double>(r.m_n) / static_cast<double>(r.n);
  return std::max(0.0, r.tau_star - noise);
}

ConfidenceReport confidence_report(const DenoiseResult& r, double quantile_factor) {
  ConfidenceReport c;
  c.mode = r.mode;
  c.quantile_factor = quantile_factor;
  c.tau_star = r.tau_star;
  c.k_const2 = variance_constant(r);
  c.rho_hat = estimate_tail(r, std::sqrt(c.k_const2));
  const double n = static_cast<double>(r.n);
  const double s2 = r.sigma2_n;
  const double delta2 = 4.0 * s2 * c.k_const2 * c.rho_hat / n +
                        3.0 * s2 * s2 * c.k_const2 * c.k_const2 * static_cast<double>(r.m_n) / (n * n);
  c.delta_n = std::sqrt(std::max(0.0, delta2));
  c.bound95 = c.tau_star + quantile_factor * c.delta_n;
  return c;
}

double true_error(const DenoiseResult& r, std::span<const double> truth) {
  double err = 0.0;
  const std::size_t m = r.coeffs.k_max();
  for (std::size_t k = 0; k < m; ++k) {
    const double c = k < truth.size() ? truth[k] : 0.0;
    const double d = r.coeffs.values[k] - c;
    err += d * d;
  }
  for (std::size_t k = m; k < truth.size(); ++k) err += truth[k] * truth[k];
  return err;
}

double true_error(const DenoiseResult& r, const SampledSignal& s) {
  if (!s.truth) throw ValidationError("true_error: the signal carries no simulation truth");
  return true_error(r, *s.truth);
}

}  // namespace orthoden
