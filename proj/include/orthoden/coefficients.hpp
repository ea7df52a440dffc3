#ifndef ORTHODEN_COEFFICIENTS_HPP
#define ORTHODEN_COEFFICIENTS_HPP

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "orthoden/basis.hpp"
#include "orthoden/design.hpp"

namespace orthoden {

enum class CoefficientKind { exact, riemann, empirical };
std::string_view to_string(CoefficientKind kind);

/// How grid sums n^-1 sum_i g(x_i) are scaled. A uniform-grid average
/// approximates int g dx divided by the domain length, so the
/// grid-consistent normalization multiplies by that length and the sums
/// converge to the Fourier-Riesz coefficients. The paper normalization keeps
/// the bare n^-1 sum.
enum class Normalization { grid_consistent, paper };
std::string_view to_string(Normalization n);

double normalization_scale(Normalization norm, const Interval& domain) noexcept;

/// Fourier-Riesz coefficients c(1..k_max), 1-based through operator().
struct CoefficientSet {
  std::vector<double> values;
  CoefficientKind kind = CoefficientKind::exact;
  std::size_t n = 0;   ///< sample size (riemann/empirical)
  double scale = 1.0;  ///< grid-sum multiplier (riemann/empirical)

  std::size_t k_max() const noexcept { return values.size(); }
  double operator()(std::size_t k) const { return values.at(k - 1); }
};

/// Largest coefficient index ever formed from n samples: 2 * floor(n/3).
constexpr std::size_t coefficient_cap(std::size_t n) noexcept { return 2 * (n / 3); }

/// gamma at the grid points as used in every grid sum. Interior points carry
/// gamma(x_i). Where gamma ~ C t^s at distance t from an endpoint, the
/// endpoint carries -zeta(-s) h^(1+s) C n / L (h the spacing, L the domain
/// length), which removes the leading h^(1+s) error of the sum; for s = 0
/// this is the trapezoid half weight.
std::vector<double> grid_weights(const WeightFunction& w, const DesignGrid& grid);

/// c(k) = int f phi_k gamma dx. The rule order starts at `quad_order` and is
/// doubled until every coefficient moves by less than `tolerance`.
CoefficientSet exact_coefficients(const std::function<double(double)>& f, const OrthonormalBasis& basis,
                                  std::size_t k_max, std::size_t quad_order = 512, double tolerance = 1e-10);

/// c_n(k) = scale * n^-1 sum_i f(x_i) phi_k(x_i) gamma(x_i).
CoefficientSet riemann_coefficients(const std::function<double(double)>& f, const OrthonormalBasis& basis,
                                    const DesignGrid& grid, std::size_t k_max,
                                    Normalization norm = Normalization::grid_consistent);

/// c(k, n) = scale * n^-1 sum_i xi(i) phi_k(x_i) gamma(x_i), k <= 2 floor(n/3).
CoefficientSet empirical_coefficients(const SampledSignal& s, const OrthonormalBasis& basis, std::size_t k_max,
                                      Normalization norm = Normalization::grid_consistent);

/// Batched grid projection: column r of the result holds
///   scale * n^-1 sum_i values(i, r) phi_k(x_i) gamma(x_i),  k = 1..k_max.
/// Rows of `values` follow the grid order.
Eigen::MatrixXd project_columns(const OrthonormalBasis& basis, const DesignGrid& grid, const Eigen::MatrixXd& values,
                                std::size_t k_max, double scale);

/// v_k(n) = n^-1 sum_i phi_k(x_i)^2 gamma(x_i)^2.
double design_variance(const OrthonormalBasis& basis, const DesignGrid& grid, std::size_t k);
/// v_1(n) .. v_{k_max}(n) in one pass over the grid.
std::vector<double> design_variances(const OrthonormalBasis& basis, const DesignGrid& grid, std::size_t k_max);

}  // namespace orthoden

#endif  // ORTHODEN_COEFFICIENTS_HPP
