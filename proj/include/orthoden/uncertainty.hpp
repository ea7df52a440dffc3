#ifndef ORTHODEN_UNCERTAINTY_HPP
#define ORTHODEN_UNCERTAINTY_HPP

#include <span>

#include "orthoden/denoise.hpp"

namespace orthoden {

/// Default quantile factor of the 0.95 error bound.
inline constexpr double kQuantileFactor = 2.54;

/// Error bound  ||f_hat - f||^2 <= tau* + q * delta(n)  with
///   delta^2(n) = 4 sigma^2 k^2 rho_hat / n + 3 sigma^4 k^4 M / n^2.
struct ConfidenceReport {
  double tau_star = 0.0;
  double delta_n = 0.0;
  double bound95 = 0.0;
  double rho_hat = 0.0;
  double k_const2 = 0.0;  ///< the k^2 used above
  double quantile_factor = kQuantileFactor;
  VarianceMode mode = VarianceMode::exact_design;
};

/// k^2 for the result's mode: K(gamma)^2 (paper) or the mean noise factor
/// s_k over the tau window k = M+1..2M (exact design).
double variance_constant(const DenoiseResult& r);

/// rho_hat = max(0, tau* - sigma^2(n) k^2 M / n), with k = k_const.
double estimate_tail(const DenoiseResult& r, double k_const);

ConfidenceReport confidence_report(const DenoiseResult& r, double quantile_factor = kQuantileFactor);

/// ||f_hat - f||^2_gamma by Parseval: sum_{k<=M} (c(k,n) - c(k))^2 + rho(M).
double true_error(const DenoiseResult& r, std::span<const double> truth);
/// Same, reading the truth carried by a simulated signal; throws when absent.
double true_error(const DenoiseResult& r, const SampledSignal& s);

}  // namespace orthoden

#endif  // ORTHODEN_UNCERTAINTY_HPP
