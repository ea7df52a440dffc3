#ifndef ORTHODEN_ENERGY_HPP
#define ORTHODEN_ENERGY_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "orthoden/denoise.hpp"

namespace orthoden {

/// Bias handling of the energy estimators.
///  - paper: the displayed estimators verbatim (ordinary: sum c^2 - M K^2 s^2/n + tau*;
///    general order: sum w c^2 - K^2 s^2/n + tau*_w);
///  - corrected: per-coefficient noise debias summed with the energy weights,
///    plus the clipped tail estimate in place of tau*.
enum class CorrectionMode { paper, corrected };
std::string_view to_string(CorrectionMode m);
CorrectionMode parse_correction_mode(std::string_view text);

/// Energy weight w(k) = k^theta, or an explicit positive table w(1..K).
class EnergyWeight {
 public:
  static EnergyWeight power(double theta);
  static EnergyWeight tabulated(std::vector<double> table);

  double theta() const noexcept { return theta_; }
  bool is_power() const noexcept { return table_.empty(); }
  /// w(k), k >= 1.
  double operator()(std::size_t k) const;

 private:
  double theta_ = 0.0;
  std::vector<double> table_;
};

enum class EnergyKind { ordinary, weighted };

struct EnergyEstimate {
  double value = 0.0;
  double variance = 0.0;
  double ci_lo = 0.0;  ///< value -/+ 1.96 sd
  double ci_hi = 0.0;
  std::size_t order_used = 0;  ///< M(n) or N_w
  EnergyKind kind = EnergyKind::ordinary;
  CorrectionMode correction = CorrectionMode::corrected;
  VarianceMode mode = VarianceMode::exact_design;
  /// Estimate of the truncated energy sum_{k <= order} w(k) c(k)^2 (no tail term).
  double truncated_value = 0.0;
  bool negative = false;  ///< value < 0 (possible in paper mode)
  std::size_t n = 0;
  double sigma2_n = 0.0;
  double tau_star = 0.0;  ///< tau(order) or tau_w(order)
  /// Energy-weighted noise constant k^2 with Var sqrt(G(n)) ~ sigma^2 k^2 / n.
  double k_const2 = 0.0;
};

/// Ordinary energy G = sum c(k)^2 from an adaptive denoise result.
EnergyEstimate ordinary_energy(const DenoiseResult& r, CorrectionMode correction = CorrectionMode::corrected);

/// Interval for sqrt(G):  |sqrt(G) - sqrt(G(n))| <= 6 sigma(n) k / sqrt(n).
struct FisherInterval {
  double center_sqrt = 0.0;
  double radius_sqrt = 0.0;
  double lo_sqrt = 0.0;
  double hi_sqrt = 0.0;
  double lo = 0.0;  ///< squared back to the energy scale
  double hi = 0.0;
  bool clipped = false;  ///< the energy estimate was negative and was replaced by 0
};

FisherInterval fisher_interval(const EnergyEstimate& e, std::size_t n, double sigma2_n, double k_const);
/// Convenience overload using the estimate's own n, sigma^2(n) and k^2.
FisherInterval fisher_interval(const EnergyEstimate& e);

/// W_w[f] = sum_k w(k) c(k)^2.
double weighted_energy_truth(std::span<const double> truth, const EnergyWeight& w);

/// tau_w(N) = sum_{k=N+1}^{2N} w(k) c(k, n)^2.
double tau_w(const CoefficientSet& c, const EnergyWeight& w, std::size_t big_n);

/// N_w = argmin_{1 <= N <= floor(n/3)} tau_w(N), smallest N on ties.
std::size_t select_order_w(const CoefficientSet& c, const EnergyWeight& w, std::size_t n);

struct EnergyOptions {
  DenoiseOptions denoise{};
  CorrectionMode correction = CorrectionMode::corrected;
};

/// Adaptive general-order energy estimate from raw observations.
EnergyEstimate weighted_energy(const SampledSignal& s, const OrthonormalBasis& basis, const EnergyWeight& w,
                               const EnergyOptions& opts = {});

/// Same, given the full coefficient vector and the ordinary denoise result
/// (which supplies sigma^2(n)).
EnergyEstimate weighted_energy_from(const SampledSignal& s, const OrthonormalBasis& basis,
                                    const CoefficientSet& full, const DenoiseResult& base, const EnergyWeight& w,
                                    CorrectionMode correction);

}  // namespace orthoden

#endif  // ORTHODEN_ENERGY_HPP
