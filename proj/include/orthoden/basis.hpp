#ifndef ORTHODEN_BASIS_HPP
#define ORTHODEN_BASIS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "orthoden/quadrature.hpp"
#include "orthoden/weight.hpp"

namespace orthoden {

/// One row of the recurrence  phi_{k+2}(x) = (A x + B) phi_{k+1}(x) + C phi_k(x).
struct RecurrenceRow {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct BasisOptions {
  /// Nodes of the validation quadrature; doubled until successive
  /// integrals agree to `tolerance`.
  std::size_t quad_order = 512;
  double tolerance = 1e-10;
  /// Largest admissible |<phi_j, phi_k>_gamma - delta_jk| during validation.
  double orthonormality_tolerance = 1e-8;
  /// Degrees covered by the validation Gram matrix.
  std::size_t validate_up_to = 30;
};

/// The orthonormal polynomial system phi_1, phi_2, ... relative to a weight,
/// indexed from 1 with deg phi_k = k - 1 (phi_1 is the constant C0).
///
/// Immutable after construction; safe to share between threads.
class OrthonormalBasis {
 public:
  const WeightFunction& weight() const noexcept { return weight_; }
  const WeightConstants& constants() const noexcept { return constants_; }
  std::size_t max_degree() const noexcept { return rows_.size() + 1; }
  /// Rows for k = 1 .. max_degree - 1: row[k-1] produces phi_{k+1}.
  const std::vector<RecurrenceRow>& recurrence() const noexcept { return rows_; }
  /// Value of the constant phi_1 (C0).
  double c0() const noexcept { return p0_; }
  /// Worst orthonormality defect measured at construction.
  double orthonormality_error() const noexcept { return ortho_error_; }

  /// phi_1(x) .. phi_{k_max}(x). Throws ValidationError if x is outside the
  /// domain or k_max exceeds max_degree.
  std::vector<double> eval(double x, std::size_t k_max) const;
  /// Same as eval() but writes into `out` (size >= k_max) without checks.
  void eval_into(double x, std::span<double> out) const noexcept;
  /// Partial sum  sum_{k <= coeffs.size()} coeffs[k-1] phi_k(x).
  double series(double x, std::span<const double> coeffs) const;

  /// Validation quadrature rule for int g(x) gamma(x) dx of the given order.
  QuadratureRule gamma_rule(std::size_t order) const;

 private:
  friend OrthonormalBasis build_basis(const WeightFunction&, std::size_t, const BasisOptions&);
  OrthonormalBasis(WeightFunction w, WeightConstants c) : weight_(std::move(w)), constants_(c) {}

  WeightFunction weight_;
  WeightConstants constants_;
  std::vector<RecurrenceRow> rows_;
  double p0_ = 0.0;
  double ortho_error_ = 0.0;
};

/// Builds phi_1 .. phi_{max_degree} with the Stieltjes procedure on a
/// discretization of gamma (Gauss-Jacobi for the Jacobi family, composite
/// Gauss-Legendre per table panel for tabulated weights), then validates
/// the Gram matrix. Throws NumericalError naming the worst (j, k) pair when
/// the orthonormality defect exceeds the tolerance.
OrthonormalBasis build_basis(const WeightFunction& w, std::size_t max_degree, const BasisOptions& opts = {});

/// Free-function form of OrthonormalBasis::eval.
std::vector<double> eval_basis(const OrthonormalBasis& b, double x, std::size_t k_max);

/// int integrand(x) gamma(x) dx, doubling the rule order from `quad_order`
/// until successive values agree to 1e-10 (relative to max(1, |value|)).
/// Throws NumericalError on non-finite integrand values or no convergence.
double gamma_quadrature(const OrthonormalBasis& b, const std::function<double(double)>& integrand,
                        std::size_t quad_order = 512);

/// Default cache size for a largest anticipated sample size: 2 * floor(n/3).
std::size_t default_max_degree(std::size_t n_max);

}  // namespace orthoden

#endif  // ORTHODEN_BASIS_HPP
