#ifndef ORTHODEN_DENOISE_HPP
#define ORTHODEN_DENOISE_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "orthoden/basis.hpp"
#include "orthoden/coefficients.hpp"
#include "orthoden/design.hpp"

namespace orthoden {

/// Which constant stands for the per-coefficient noise variance in
/// variance-dependent formulas. `paper` uses K(gamma)^2 as written;
/// `exact_design` uses s_k = scale^2 v_k(n) measured on the actual grid.
enum class VarianceMode { paper, exact_design };
std::string_view to_string(VarianceMode m);
VarianceMode parse_variance_mode(std::string_view text);

struct DenoiseOptions {
  Normalization normalization = Normalization::grid_consistent;
  VarianceMode mode = VarianceMode::exact_design;
};

/// Output of the adaptive projection estimator
///   f_hat(n, x) = sum_{k <= M(n)} c(k, n) phi_k(x).
struct DenoiseResult {
  std::size_t n = 0;
  std::size_t m_n = 0;        ///< adaptive order M(n)
  CoefficientSet coeffs;      ///< c(1..M(n), n)
  double tau_star = 0.0;      ///< tau(M(n), n)
  double sigma2_n = 0.0;      ///< residual variance estimate
  VarianceMode mode = VarianceMode::exact_design;
  Normalization normalization = Normalization::grid_consistent;
  double k_gamma = 0.0;       ///< K(gamma) of the basis weight
  /// s_k = scale^2 v_k(n) for k = 1..2 M(n): Var c(k, n) = sigma^2 s_k / n.
  std::vector<double> noise_factors;
};

/// tau(N, n) = sum_{k=N+1}^{2N} c(k, n)^2. Requires 1 <= N and 2N <= k_max.
double tau(const CoefficientSet& c, std::size_t big_n);

struct OrderSelection {
  std::size_t m_n = 0;
  double tau_star = 0.0;
  std::vector<double> tau_curve;  ///< tau(N, n), N = 1..floor(n/3)
};

/// M(n) = argmin_{1 <= N <= floor(n/3)} tau(N, n); ties go to the smallest N.
/// Requires c.k_max() >= 2 floor(n/3) and n >= 15.
OrderSelection select_order(const CoefficientSet& c, std::size_t n);

/// Adaptive estimate from raw observations.
DenoiseResult denoise(const SampledSignal& s, const OrthonormalBasis& basis, const DenoiseOptions& opts = {});

/// Same as denoise() once the full coefficient vector c(1..2 floor(n/3), n)
/// is available (e.g. computed in a batch).
DenoiseResult denoise_from_coefficients(const SampledSignal& s, const OrthonormalBasis& basis,
                                        const CoefficientSet& full, const DenoiseOptions& opts = {});

/// f_hat(n, x). Throws ValidationError outside the domain.
double eval_estimate(const DenoiseResult& r, const OrthonormalBasis& basis, double x);

/// sigma^2(n) = (n - M(n) - 1)^-1 sum_i (f_hat(n, x_i) - xi(i))^2.
double estimate_sigma2(const SampledSignal& s, const DenoiseResult& r, const OrthonormalBasis& basis);

/// Oracle bias-variance curve A(N, n) = rho(N) + N/n for a known truth.
struct OracleReport {
  std::size_t n0 = 0;
  double a_star = 0.0;
  std::vector<double> a_curve;  ///< N = 1..floor(n/3)
  double n0_over_sqrt_n = 0.0;
};

OracleReport oracle_curve(std::span<const double> truth, std::size_t n);

}  // namespace orthoden

#endif  // ORTHODEN_DENOISE_HPP
