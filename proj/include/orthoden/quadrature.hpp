#ifndef ORTHODEN_QUADRATURE_HPP
#define ORTHODEN_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace orthoden {

/// Nodes and weights of an interpolatory rule: sum_i w_i g(x_i).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double apply(const std::function<double(double)>& g) const;
};

/// Orthonormal three-term recurrence of a measure on the real line:
///   x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1},  p_0 = mass^{-1/2}.
/// `diag[k]` holds a_k (k = 0..m-1) and `offdiag[k]` holds b_k (k = 1..m-1,
/// offdiag[0] unused and zero).
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;
  double mass = 0.0;
};

/// Closed-form recurrence for the classical weight (1-x)^a (1+x)^b on
/// [-1, 1], a, b > -1. Used to seed Gauss-Jacobi nodes and as a test oracle.
JacobiMatrix jacobi_recurrence(std::size_t m, double a, double b);

/// Gauss rule for the measure described by `jm` (size = jm.diag.size()).
/// Nodes are eigenvalues of the Jacobi matrix; weights come from the
/// Christoffel function, which keeps the cost O(m^2) for large m.
QuadratureRule gauss_rule(const JacobiMatrix& jm);

/// m-point Gauss-Jacobi rule for  int_{-1}^{1} g(x) (1-x)^a (1+x)^b dx.
QuadratureRule gauss_jacobi(std::size_t m, double a, double b);

/// m-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(std::size_t m, double lo = -1.0, double hi = 1.0);

/// Integral of g over (lo, hi) with possible integrable endpoint
/// singularities (double-exponential rule). `g` receives the point x and
/// its distances to lo and hi so that endpoint powers can be formed without
/// cancellation.
double integrate_singular(const std::function<double(double, double, double)>& g, double lo,
                          double hi, double tolerance = 1e-13);

}  // namespace orthoden

#endif  // ORTHODEN_QUADRATURE_HPP
