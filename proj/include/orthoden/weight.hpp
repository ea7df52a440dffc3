#ifndef ORTHODEN_WEIGHT_HPP
#define ORTHODEN_WEIGHT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orthoden {

enum class WeightKind { jacobi, beta01, tabulated };

std::string_view to_string(WeightKind kind);
WeightKind parse_weight_kind(std::string_view text);

/// Closed interval [lo, hi].
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x, double slack = 1e-12) const noexcept { return x >= lo - slack && x <= hi + slack; }
};

/// The signal weight gamma(x).
///
/// Three families are supported:
///  - jacobi:    (1-x)^alpha (1+x)^beta on [-1, 1], alpha, beta > -1/2;
///  - beta01:    x^(alpha-1) (1-x)^(beta-1) / B(alpha, beta) on [0, 1], alpha, beta > 0;
///  - tabulated: piecewise-linear interpolation of nonnegative samples on [-1, 1].
///
/// Every weight is redefined to be exactly zero at both endpoints of its
/// domain, so endpoint terms drop out of all grid sums.
class WeightFunction {
 public:
  /// Canonical Jacobi form on y in [-1, 1]:
  ///   gamma(x(y)) dx = scale * (1-y)^a (1+y)^b dy,  x(y) = lo + (y+1)(hi-lo)/2.
  struct CanonicalJacobi {
    double a;
    double b;
    double scale;
  };

  static WeightFunction jacobi(double alpha, double beta);
  static WeightFunction beta01(double alpha, double beta);
  static WeightFunction tabulated(std::vector<double> xs, std::vector<double> values);

  WeightKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  /// Exponent kappa of the derivative growth |gamma'(x)| <= C (1 -+ x)^(-kappa-1).
  double kappa() const noexcept;
  Interval domain() const noexcept { return domain_; }

  /// gamma(x); exactly 0 at the endpoints. Throws ValidationError outside the domain.
  double operator()(double x) const;
  /// gamma at x given its distances to the left and right endpoints; used by
  /// quadrature near endpoint singularities.
  double value(double x, double to_lo, double to_hi) const;

  /// Leading behaviour gamma ~ coefficient * t^exponent at distance t from
  /// the lower (upper = false) or upper endpoint.
  struct EndpointLaw {
    double exponent;
    double coefficient;
  };
  EndpointLaw endpoint_law(bool upper) const noexcept;

  std::optional<CanonicalJacobi> canonical() const noexcept;
  const std::vector<double>& table_x() const noexcept { return xs_; }
  const std::vector<double>& table_values() const noexcept { return values_; }

  std::string describe() const;

 private:
  WeightFunction() = default;

  WeightKind kind_ = WeightKind::jacobi;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double log_norm_ = 0.0;  // beta01: -log B(alpha, beta)
  Interval domain_{};
  std::vector<double> xs_;
  std::vector<double> values_;
};

/// Validated factory. `alpha`/`beta` are ignored for the tabulated kind,
/// which has its own factory.
WeightFunction make_weight(WeightKind kind, double alpha, double beta);

/// Derived constants of a weight: K(gamma), the mass, C0 = mass^(-1/2), the
/// first-moment centre C1 and the normalizer lambda with
/// lambda^-2 = int (x - C1)^2 gamma dx.
struct WeightConstants {
  double k_gamma = 0.0;
  double mass = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double lambda = 0.0;
};

/// Computes the constants from their defining integrals with a
/// double-exponential rule that tolerates the algebraic endpoint
/// singularities of gamma. On [0, 1] the constant K is taken through the
/// affine map to [-1, 1], i.e. K = (4 pi)^-1 int gamma / sqrt(x(1-x)) dx.
WeightConstants weight_constants(const WeightFunction& w, double tolerance = 1e-13);

/// Closed forms for the Jacobi weight, kept as cross-checks.
struct JacobiClosedForms {
  double mass = 0.0;             ///< 2^(a+b+1) B(a+1, b+1)
  double c1 = 0.0;               ///< (b-a)/(a+b+2)
  double lambda_inv2 = 0.0;      ///< mass * 4(a+1)(b+1)/((a+b+2)^2 (a+b+3)), the true variance
  double lambda_inv2_text = 0.0; ///< the polynomial-ratio display, off by a factor 3 at a=b=0
  double k_gamma = 0.0;          ///< 2^(a+b-1) pi^-1 B(a+1/2, b+1/2), consistent with the definition
  double k_gamma_text = 0.0;     ///< 2^(a+b) pi^-1 B(a+1/2, b+1/2), twice the definition
};

JacobiClosedForms jacobi_closed_forms(double alpha, double beta);

}  // namespace orthoden

#endif  // ORTHODEN_WEIGHT_HPP
