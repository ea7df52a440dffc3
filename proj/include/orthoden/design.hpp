#ifndef ORTHODEN_DESIGN_HPP
#define ORTHODEN_DESIGN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orthoden/basis.hpp"
#include "orthoden/weight.hpp"

namespace orthoden {

/// Smallest admissible sample size.
inline constexpr std::size_t kMinSampleSize = 15;

/// Uniform design x(i, n) = (2i - n - 1)/(n - 1), i = 1..n, affinely mapped
/// onto the weight domain. Endpoints are exact.
struct DesignGrid {
  std::size_t n = 0;
  Interval domain{};
  std::vector<double> points;

  double spacing() const noexcept { return domain.length() / static_cast<double>(n - 1); }
};

DesignGrid make_grid(std::size_t n, Interval domain = {-1.0, 1.0});

enum class NoiseLaw { gaussian, uniform, weibull_tail };

std::string_view to_string(NoiseLaw law);
NoiseLaw parse_noise_law(std::string_view text);

/// Centered unit-variance noise scaled by sigma, with the tail bound
///   max(P(e > u), P(e < -u)) <= exp(-(u/Q)^q).
struct NoiseModel {
  NoiseLaw law = NoiseLaw::gaussian;
  double sigma = 1.0;
  double q = 2.0;
  double big_q = 1.4142135623730951;
  std::uint64_t seed = 0;

  /// Exact one-sided exceedance P(e > u) of the unit law.
  double tail_probability(double u) const;
  /// exp(-(u/Q)^q).
  double tail_bound(double u) const;
};

/// Builds a model with the tail parameters that hold for the law:
/// gaussian q=2, Q=sqrt(2); uniform on [-sqrt3, sqrt3] q=2, Q=1;
/// symmetric Weibull tail with shape `shape` and Q equal to its scale.
NoiseModel make_noise(NoiseLaw law, double sigma, std::uint64_t seed, double shape = 1.5);

/// splitmix64 mix of (base, index); used for per-replication seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// n unit-variance draws of the law for the given stream index.
std::vector<double> draw_unit_noise(const NoiseModel& noise, std::size_t n, std::uint64_t stream);

enum class SignConvention { positive, alternating, random };

/// Coefficients c(k) = sign(k) * c_scale * k^(-delta - 1/2) * sqrt(L(k)),
/// L(k) = (1 + log k)^log_power, so the tail rho(N) behaves as N^(-2 delta) L(N).
struct SpectralDecayModel {
  double delta = 1.0;
  double log_power = 0.0;
  SignConvention signs = SignConvention::positive;
  double c_scale = 1.0;
  std::uint64_t sign_seed = 0;
};

std::vector<double> synth_coefficients(const SpectralDecayModel& m, std::size_t k_max);

/// rho(N) = sum_{k > N} c(k)^2 over the given (finite) coefficients.
double tail_energy(std::span<const double> coeffs, std::size_t n_terms);

enum class TailVerdict { plausible, implausible, inapplicable };
std::string_view to_string(TailVerdict v);

struct TailRatioReport {
  std::vector<std::size_t> n_values;
  std::vector<double> ratios;  ///< rho(2N)/rho(N); NaN where rho(N) == 0
  TailVerdict verdict = TailVerdict::inapplicable;
};

/// Ratio condition 0 < lim inf rho(2N)/rho(N) <= lim sup < 1 judged on the
/// listed N: plausible when every ratio lies in (lo, hi). The model form
/// completes the tail beyond the synthesized range with the integral of c(t)^2.
TailRatioReport tail_ratio_check(const SpectralDecayModel& m, std::span<const std::size_t> n_list, double lo = 0.05,
                                 double hi = 0.95);
TailRatioReport tail_ratio_check(std::span<const double> coeffs, std::span<const std::size_t> n_list,
                                 double lo = 0.05, double hi = 0.95);

/// Observations on a grid, optionally with the simulation truth.
struct SampledSignal {
  DesignGrid grid;
  std::vector<double> xi;
  std::optional<std::vector<double>> truth;
  std::optional<double> sigma_true;

  std::size_t size() const noexcept { return xi.size(); }
};

/// f(x_i) = sum_k truth[k-1] phi_k(x_i) on every grid point.
std::vector<double> signal_values(std::span<const double> truth, const OrthonormalBasis& basis,
                                  const DesignGrid& grid);

/// xi(i) = f(x_i) + sigma * e(i); deterministic in (noise.seed, stream).
SampledSignal sample_signal(std::span<const double> truth, const OrthonormalBasis& basis, const DesignGrid& grid,
                            const NoiseModel& noise, std::uint64_t stream = 0);

}  // namespace orthoden

#endif  // ORTHODEN_DESIGN_HPP
