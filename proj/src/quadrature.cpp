#include "orthoden/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "orthoden/error.hpp"

namespace orthoden {

double QuadratureRule::apply(const std::function<double(double)>& g) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * g(nodes[i]);
  return acc;
}

JacobiMatrix jacobi_recurrence(std::size_t m, double a, double b) {
  if (!(a > -1.0) || !(b > -1.0)) throw ValidationError("jacobi_recurrence: exponents must exceed -1");
  if (m == 0) throw ValidationError("jacobi_recurrence: empty rule requested");
  JacobiMatrix jm;
  jm.diag.assign(m, 0.0);
  jm.offdiag.assign(m, 0.0);
  jm.mass = std::exp((a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                     std::lgamma(a + b + 2.0));

  const double ab = a + b;
  jm.diag[0] = (b - a) / (ab + 2.0);
  for (std::size_t k = 1; k < m; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    jm.diag[k] = (b * b - a * a) / (s * (s + 2.0));
    double beta_k;
    if (k == 1) {
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta_k = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    jm.offdiag[k] = std::sqrt(beta_k);
  }
  // At a == b the diagonal vanishes analytically; keep it exactly zero.
  if (a == b) std::fill(jm.diag.begin(), jm.diag.end(), 0.0);
  return jm;
}

QuadratureRule gauss_rule(const JacobiMatrix& jm) {
  const std::size_t m = jm.diag.size();
  QuadratureRule rule;
  if (m == 1) {
    rule.nodes = {jm.diag[0]};
    rule.weights = {jm.mass};
    return rule;
  }
  // Pal-Walker-Kahan QR, eigenvalues only: O(m^2).
  std::vector<double> d = jm.diag;
  std::vector<double> e(jm.offdiag.begin() + 1, jm.offdiag.end());
  const lapack_int info = LAPACKE_dsterf(static_cast<lapack_int>(m), d.data(), e.data());
  if (info != 0) throw NumericalError("gauss_rule: tridiagonal eigensolver failed (info " + std::to_string(info) + ")");

  rule.nodes = std::move(d);
  rule.weights.resize(m);
  const double p0 = 1.0 / std::sqrt(jm.mass);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = rule.nodes[i];
    // Christoffel function: 1 / sum_k p_k(x)^2 over orthonormal p_0..p_{m-1}.
    double prev = 0.0;
    double cur = p0;
    double sum = cur * cur;
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const double next = ((x - jm.diag[k]) * cur - jm.offdiag[k] * prev) / jm.offdiag[k + 1];
      prev = cur;
      cur = next;
      sum += cur * cur;
    }
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

QuadratureRule gauss_jacobi(std::size_t m, double a, double b) { return gauss_rule(jacobi_recurrence(m, a, b)); }

QuadratureRule gauss_legendre(std::size_t m, double lo, double hi) {
  QuadratureRule rule = gauss_jacobi(m, 0.0, 0.0);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < m; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

double integrate_singular(const std::function<double(double, double, double)>& g, double lo, double hi,
                          double tolerance) {
  if (!(hi > lo)) throw ValidationError("integrate_singular: empty interval");
  const double half = 0.5 * (hi - lo);
  // The two-argument form hands over the complement of the abscissa: negative
  // distance to -1 on the left half, distance to +1 on the right half.
  auto unit = [&](double z, double zc) {
    double to_lo;
    double to_hi;
    if (zc < 0.0) {
      to_lo = -zc;
      to_hi = 2.0 + zc;
    } else {
      to_hi = zc;
      to_lo = 2.0 - zc;
    }
    const double x = z < 0.0 ? lo + half * to_lo : hi - half * to_hi;
    return g(x, half * to_lo, half * to_hi);
  };
  boost::math::quadrature::tanh_sinh<double> integrator(20);
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  try {
    value = half * integrator.integrate(unit, tolerance, &error, &l1);
  } catch (const NumericalError&) {
    throw;
  } catch (const std::domain_error& e) {
    throw NumericalError(std::string("integrate_singular: ") + e.what());
  } catch (const boost::math::evaluation_error& e) {
    throw NumericalError(std::string("integrate_singular: ") + e.what());
  }
  if (!std::isfinite(value)) throw NumericalError("integrate_singular: non-finite integral");
  if (error > 1e-8 * std::max(1.0, l1)) {
    throw NumericalError("integrate_singular: no convergence (estimated error " + std::to_string(error) + ")");
  }
  return value;
}

}  // namespace orthoden
