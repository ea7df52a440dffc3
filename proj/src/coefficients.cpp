#include "orthoden/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include "orthoden/error.hpp"

namespace orthoden {

namespace {

void check_grid(const OrthonormalBasis& basis, const DesignGrid& grid) {
  const Interval bd = basis.weight().domain();
  if (bd.lo != grid.domain.lo || bd.hi != grid.domain.hi) {
    throw ValidationError("grid domain does not match the weight domain of the basis");
  }
}

void check_k(const OrthonormalBasis& basis, std::size_t k_max) {
  if (k_max == 0 || k_max > basis.max_degree()) {
    throw ValidationError("k_max=" + std::to_string(k_max) + " outside the basis cache of " +
                          std::to_string(basis.max_degree()));
  }
}

}  // namespace

std::vector<double> grid_weights(const WeightFunction& w, const DesignGrid& grid) {
  const Interval d = w.domain();
  if (d.lo != grid.domain.lo || d.hi != grid.domain.hi) {
    throw ValidationError("grid domain does not match the weight domain");
  }
  std::vector<double> g(grid.n);
  for (std::size_t i = 1; i + 1 < grid.n; ++i) g[i] = w.value(grid.points[i], grid.points[i] - d.lo, d.hi - grid.points[i]);
  // Endpoint values cancel the leading h^(1+s) term of the sum near t^s.
  const double h = grid.spacing();
  const double per_point = d.length() / static_cast<double>(grid.n);
  auto end_value = [&](bool upper) {
    const WeightFunction::EndpointLaw law = w.endpoint_law(upper);
    return -boost::math::zeta(-law.exponent) * std::pow(h, 1.0 + law.exponent) * law.coefficient / per_point;
  };
  g.front() = end_value(false);
  g.back() = end_value(true);
  return g;
}

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::exact:
      return "exact";
    case CoefficientKind::riemann:
      return "riemann";
    case CoefficientKind::empirical:
      return "empirical";
  }
  return "unknown";
}

std::string_view to_string(Normalization n) {
  return n == Normalization::paper ? "paper" : "grid-consistent";
}

double normalization_scale(Normalization norm, const Interval& domain) noexcept {
  return norm == Normalization::paper ? 1.0 : domain.length();
}

CoefficientSet exact_coefficients(const std::function<double(double)>& f, const OrthonormalBasis& basis,
                                  std::size_t k_max, std::size_t quad_order, double tolerance) {
  check_k(basis, k_max);
  auto run = [&](std::size_t order) {
    const QuadratureRule rule = basis.gamma_rule(order);
    std::vector<double> c(k_max, 0.0);
    std::vector<double> phi(k_max);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double fx = f(rule.nodes[i]);
      if (!std::isfinite(fx)) throw NumericalError("exact_coefficients: non-finite integrand");
      basis.eval_into(rule.nodes[i], phi);
      const double wf = rule.weights[i] * fx;
      for (std::size_t k = 0; k < k_max; ++k) c[k] += wf * phi[k];
    }
    return c;
  };
  std::size_t order = std::max(quad_order, k_max + 8);
  std::vector<double> last = run(order);
  constexpr std::size_t kMaxOrder = 8192;
  while (order < kMaxOrder) {
    order *= 2;
    std::vector<double> now = run(order);
    double diff = 0.0;
    for (std::size_t k = 0; k < k_max; ++k) diff = std::max(diff, std::abs(now[k] - last[k]));
    if (diff <= tolerance) return {std::move(now), CoefficientKind::exact, 0, 1.0};
    last = std::move(now);
  }
  throw NumericalError("exact_coefficients: quadrature did not converge up to order " + std::to_string(kMaxOrder));
}

Eigen::MatrixXd project_columns(const OrthonormalBasis& basis, const DesignGrid& grid, const Eigen::MatrixXd& values,
                                std::size_t k_max, double scale) {
  check_grid(basis, grid);
  check_k(basis, k_max);
  if (static_cast<std::size_t>(values.rows()) != grid.n) {
    throw ValidationError("projection input has " + std::to_string(values.rows()) + " rows for a grid of " +
                          std::to_string(grid.n));
  }
  const Eigen::Index kk = static_cast<Eigen::Index>(k_max);
  constexpr Eigen::Index kBlock = 128;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(kk, values.cols());
  Eigen::MatrixXd panel(kk, kBlock);
  const std::vector<double> gw = grid_weights(basis.weight(), grid);
  for (std::size_t i0 = 0; i0 < grid.n; i0 += kBlock) {
    const Eigen::Index nb = static_cast<Eigen::Index>(std::min<std::size_t>(kBlock, grid.n - i0));
    for (Eigen::Index j = 0; j < nb; ++j) {
      const double x = grid.points[i0 + static_cast<std::size_t>(j)];
      auto col = panel.col(j);
      basis.eval_into(x, std::span<double>(col.data(), k_max));
      col *= gw[i0 + static_cast<std::size_t>(j)];
    }
    out.noalias() += panel.leftCols(nb) * values.middleRows(static_cast<Eigen::Index>(i0), nb);
  }
  out *= scale / static_cast<double>(grid.n);
  return out;
}

CoefficientSet riemann_coefficients(const std::function<double(double)>& f, const OrthonormalBasis& basis,
                                    const DesignGrid& grid, std::size_t k_max, Normalization norm) {
  Eigen::MatrixXd y(grid.n, 1);
  for (std::size_t i = 0; i < grid.n; ++i) y(static_cast<Eigen::Index>(i), 0) = f(grid.points[i]);
  const double scale = normalization_scale(norm, grid.domain);
  const Eigen::MatrixXd c = project_columns(basis, grid, y, k_max, scale);
  return {std::vector<double>(c.data(), c.data() + c.size()), CoefficientKind::riemann, grid.n, scale};
}

CoefficientSet empirical_coefficients(const SampledSignal& s, const OrthonormalBasis& basis, std::size_t k_max,
                                      Normalization norm) {
  const std::size_t n = s.size();
  if (n != s.grid.n) throw ValidationError("signal length does not match its grid");
  if (k_max > coefficient_cap(n)) {
    throw ValidationError("k_max=" + std::to_string(k_max) + " exceeds 2*floor(n/3)=" +
                          std::to_string(coefficient_cap(n)) + " for n=" + std::to_string(n));
  }
  const Eigen::MatrixXd y = Eigen::Map<const Eigen::MatrixXd>(s.xi.data(), static_cast<Eigen::Index>(n), 1);
  const double scale = normalization_scale(norm, s.grid.domain);
  const Eigen::MatrixXd c = project_columns(basis, s.grid, y, k_max, scale);
  return {std::vector<double>(c.data(), c.data() + c.size()), CoefficientKind::empirical, n, scale};
}

std::vector<double> design_variances(const OrthonormalBasis& basis, const DesignGrid& grid, std::size_t k_max) {
  check_grid(basis, grid);
  check_k(basis, k_max);
  std::vector<double> v(k_max, 0.0);
  std::vector<double> phi(k_max);
  const std::vector<double> gw = grid_weights(basis.weight(), grid);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double g = gw[i];
    if (g == 0.0) continue;
    basis.eval_into(grid.points[i], phi);
    const double g2 = g * g;
    for (std::size_t k = 0; k < k_max; ++k) v[k] += phi[k] * phi[k] * g2;
  }
  for (double& vk : v) vk /= static_cast<double>(grid.n);
  return v;
}

double design_variance(const OrthonormalBasis& basis, const DesignGrid& grid, std::size_t k) {
  return design_variances(basis, grid, k).back();
}

}  // namespace orthoden
