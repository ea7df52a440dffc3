#include "orthoden/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orthoden/error.hpp"

namespace orthoden {

namespace {

QuadratureRule map_canonical(QuadratureRule rule, const WeightFunction::CanonicalJacobi& cj, Interval dom) {
  const double half = 0.5 * dom.length();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = dom.lo + (rule.nodes[i] + 1.0) * half;
    rule.weights[i] *= cj.scale;
  }
  return rule;
}

QuadratureRule composite_rule(const WeightFunction& w, std::size_t per_panel) {
  const auto& xs = w.table_x();
  const QuadratureRule unit = gauss_legendre(per_panel, 0.0, 1.0);
  QuadratureRule rule;
  rule.nodes.reserve(per_panel * (xs.size() - 1));
  rule.weights.reserve(per_panel * (xs.size() - 1));
  for (std::size_t p = 0; p + 1 < xs.size(); ++p) {
    const double width = xs[p + 1] - xs[p];
    for (std::size_t i = 0; i < per_panel; ++i) {
      const double x = xs[p] + width * unit.nodes[i];
      const double g = w.value(x, x + 1.0, 1.0 - x);
      if (g == 0.0) continue;
      rule.nodes.push_back(x);
      rule.weights.push_back(width * unit.weights[i] * g);
    }
  }
  return rule;
}

QuadratureRule discretize(const WeightFunction& w, std::size_t order) {
  if (auto cj = w.canonical()) return map_canonical(gauss_jacobi(order, cj->a, cj->b), *cj, w.domain());
  const std::size_t panels = w.table_x().size() - 1;
  return composite_rule(w, std::max<std::size_t>(8, (order + panels - 1) / panels));
}

}  // namespace

QuadratureRule OrthonormalBasis::gamma_rule(std::size_t order) const { return discretize(weight_, order); }

std::vector<double> OrthonormalBasis::eval(double x, std::size_t k_max) const {
  if (!weight_.domain().contains(x)) {
    std::ostringstream msg;
    msg << "basis evaluated outside its domain: x=" << x;
    throw ValidationError(msg.str());
  }
  if (k_max == 0 || k_max > max_degree()) {
    throw ValidationError("requested " + std::to_string(k_max) + " basis functions, basis holds " +
                          std::to_string(max_degree()));
  }
  std::vector<double> out(k_max);
  eval_into(x, out);
  return out;
}

void OrthonormalBasis::eval_into(double x, std::span<double> out) const noexcept {
  const std::size_t k_max = out.size();
  if (k_max == 0) return;
  out[0] = p0_;
  if (k_max == 1) return;
  out[1] = (rows_[0].a * x + rows_[0].b) * out[0];
  for (std::size_t k = 2; k < k_max; ++k) {
    const RecurrenceRow& r = rows_[k - 1];
    out[k] = (r.a * x + r.b) * out[k - 1] + r.c * out[k - 2];
  }
}

double OrthonormalBasis::series(double x, std::span<const double> coeffs) const {
  if (coeffs.empty()) return 0.0;
  if (coeffs.size() > max_degree()) throw ValidationError("series longer than the basis");
  double prev = 0.0;
  double cur = p0_;
  double acc = coeffs[0] * cur;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const RecurrenceRow& r = rows_[k - 1];
    const double next = (r.a * x + r.b) * cur + r.c * prev;
    prev = cur;
    cur = next;
    acc += coeffs[k] * cur;
  }
  return acc;
}

OrthonormalBasis build_basis(const WeightFunction& w, std::size_t max_degree, const BasisOptions& opts) {
  if (max_degree < 2) throw ValidationError("build_basis: max_degree must be at least 2");
  OrthonormalBasis basis(w, weight_constants(w));

  // Discrete measure: Gauss rule whose degree of exactness covers every
  // inner product the Stieltjes sweep forms.
  QuadratureRule measure;
  if (w.canonical()) {
    measure = discretize(w, std::max(opts.quad_order, max_degree + std::max<std::size_t>(64, max_degree / 8)));
  } else {
    measure = composite_rule(w, max_degree + 2);
  }
  const std::size_t m = measure.size();
  const auto& x = measure.nodes;
  const auto& wt = measure.weights;

  double mass = 0.0;
  for (double v : wt) mass += v;
  basis.p0_ = 1.0 / std::sqrt(mass);

  std::vector<double> prev(m, 0.0);
  std::vector<double> cur(m, basis.p0_);
  std::vector<double> next(m);
  basis.rows_.resize(max_degree - 1);
  double b_prev = 0.0;
  for (std::size_t d = 0; d + 1 < max_degree; ++d) {
    double a_d = 0.0;
    for (std::size_t j = 0; j < m; ++j) a_d += wt[j] * x[j] * cur[j] * cur[j];
    double norm2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      next[j] = (x[j] - a_d) * cur[j] - b_prev * prev[j];
      norm2 += wt[j] * next[j] * next[j];
    }
    const double b_next = std::sqrt(norm2);
    if (!(b_next > 0.0) || !std::isfinite(b_next)) {
      throw NumericalError("build_basis: Stieltjes procedure broke down at degree " + std::to_string(d + 1));
    }
    for (std::size_t j = 0; j < m; ++j) next[j] /= b_next;
    basis.rows_[d] = {1.0 / b_next, -a_d / b_next, -b_prev / b_next};
    b_prev = b_next;
    std::swap(prev, cur);
    std::swap(cur, next);
  }

  // Gram-matrix validation on an independent rule.
  const std::size_t v = std::min(opts.validate_up_to, max_degree);
  std::size_t order = std::max(opts.quad_order, 2 * v + 2);
  double worst = 0.0;
  std::size_t worst_j = 0;
  std::size_t worst_k = 0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const QuadratureRule rule = discretize(w, order);
    std::vector<double> gram(v * v, 0.0);
    std::vector<double> phi(v);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      basis.eval_into(rule.nodes[i], phi);
      for (std::size_t j = 0; j < v; ++j)
        for (std::size_t k = j; k < v; ++k) gram[j * v + k] += rule.weights[i] * phi[j] * phi[k];
    }
    worst = 0.0;
    for (std::size_t j = 0; j < v; ++j) {
      for (std::size_t k = j; k < v; ++k) {
        const double err = std::abs(gram[j * v + k] - (j == k ? 1.0 : 0.0));
        if (err > worst) {
          worst = err;
          worst_j = j + 1;
          worst_k = k + 1;
        }
      }
    }
    if (worst <= opts.orthonormality_tolerance) break;
    order *= 2;
  }
  basis.ortho_error_ = worst;
  if (worst > opts.orthonormality_tolerance) {
    std::ostringstream msg;
    msg << "build_basis: orthonormality defect " << worst << " at (j, k) = (" << worst_j << ", " << worst_k
        << ") exceeds " << opts.orthonormality_tolerance;
    throw NumericalError(msg.str());
  }
  return basis;
}

std::vector<double> eval_basis(const OrthonormalBasis& b, double x, std::size_t k_max) { return b.eval(x, k_max); }

double gamma_quadrature(const OrthonormalBasis& b, const std::function<double(double)>& integrand,
                        std::size_t quad_order) {
  auto run = [&](std::size_t order) {
    const QuadratureRule rule = b.gamma_rule(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double g = integrand(rule.nodes[i]);
      if (!std::isfinite(g)) {
        std::ostringstream msg;
        msg << "gamma_quadrature: non-finite integrand at interior node x=" << rule.nodes[i];
        throw NumericalError(msg.str());
      }
      acc += rule.weights[i] * g;
    }
    return acc;
  };
  std::size_t order = std::max<std::size_t>(quad_order, 8);
  double last = run(order);
  constexpr std::size_t kMaxOrder = 1u << 15;
  while (order < kMaxOrder) {
    order *= 2;
    const double now = run(order);
    if (std::abs(now - last) <= 1e-10 * std::max(1.0, std::abs(now))) return now;
    last = now;
  }
  throw NumericalError("gamma_quadrature: no convergence up to order " + std::to_string(kMaxOrder));
}

std::size_t default_max_degree(std::size_t n_max) { return 2 * (n_max / 3); }

}  // namespace orthoden
