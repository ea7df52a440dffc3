#include "orthoden/weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthoden/error.hpp"
#include "orthoden/quadrature.hpp"

namespace orthoden {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::jacobi:
      return "jacobi";
    case WeightKind::beta01:
      return "beta01";
    case WeightKind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

WeightKind parse_weight_kind(std::string_view text) {
  if (text == "jacobi") return WeightKind::jacobi;
  if (text == "beta01") return WeightKind::beta01;
  if (text == "tabulated") return WeightKind::tabulated;
  throw ValidationError("unknown weight kind '" + std::string(text) + "'");
}

WeightFunction WeightFunction::jacobi(double alpha, double beta) {
  if (!(alpha > -0.5) || !(beta > -0.5) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    std::ostringstream msg;
    msg << "jacobi weight requires alpha, beta > -1/2 (got alpha=" << alpha << ", beta=" << beta << ")";
    throw ValidationError(msg.str());
  }
  WeightFunction w;
  w.kind_ = WeightKind::jacobi;
  w.alpha_ = alpha;
  w.beta_ = beta;
  w.domain_ = {-1.0, 1.0};
  return w;
}

WeightFunction WeightFunction::beta01(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    std::ostringstream msg;
    msg << "beta01 weight requires alpha, beta > 0 (got alpha=" << alpha << ", beta=" << beta << ")";
    throw ValidationError(msg.str());
  }
  WeightFunction w;
  w.kind_ = WeightKind::beta01;
  w.alpha_ = alpha;
  w.beta_ = beta;
  w.log_norm_ = -log_beta(alpha, beta);
  w.domain_ = {0.0, 1.0};
  return w;
}

WeightFunction WeightFunction::tabulated(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() < 2 || xs.size() != values.size()) {
    throw ValidationError("tabulated weight needs at least two (x, value) pairs of equal length");
  }
  if (xs.front() != -1.0 || xs.back() != 1.0) throw ValidationError("tabulated weight must span exactly [-1, 1]");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw ValidationError("tabulated weight abscissae must be strictly increasing");
  }
  bool positive = false;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("tabulated weight values must be finite and >= 0");
    positive = positive || v > 0.0;
  }
  if (!positive) throw ValidationError("tabulated weight is identically zero");
  WeightFunction w;
  w.kind_ = WeightKind::tabulated;
  w.domain_ = {-1.0, 1.0};
  w.xs_ = std::move(xs);
  w.values_ = std::move(values);
  return w;
}

double WeightFunction::kappa() const noexcept {
  switch (kind_) {
    case WeightKind::jacobi:
      return std::max(0.0, -std::min(alpha_, beta_));
    case WeightKind::beta01:
      return std::max(0.0, 1.0 - std::min(alpha_, beta_));
    case WeightKind::tabulated:
      return 0.0;
  }
  return 0.0;
}

double WeightFunction::operator()(double x) const {
  if (!domain_.contains(x, 0.0)) {
    std::ostringstream msg;
    msg << "weight evaluated outside its domain [" << domain_.lo << ", " << domain_.hi << "]: x=" << x;
    throw ValidationError(msg.str());
  }
  return value(x, x - domain_.lo, domain_.hi - x);
}

WeightFunction::EndpointLaw WeightFunction::endpoint_law(bool upper) const noexcept {
  switch (kind_) {
    case WeightKind::jacobi:
      return upper ? EndpointLaw{alpha_, std::pow(2.0, beta_)} : EndpointLaw{beta_, std::pow(2.0, alpha_)};
    case WeightKind::beta01:
      return upper ? EndpointLaw{beta_ - 1.0, std::exp(log_norm_)} : EndpointLaw{alpha_ - 1.0, std::exp(log_norm_)};
    case WeightKind::tabulated:
      return upper ? EndpointLaw{0.0, values_.back()} : EndpointLaw{0.0, values_.front()};
  }
  return {0.0, 0.0};
}

double WeightFunction::value(double x, double to_lo, double to_hi) const {
  if (to_lo <= 0.0 || to_hi <= 0.0) return 0.0;
  switch (kind_) {
    case WeightKind::jacobi:
      // (1 - x) is the distance to +1, (1 + x) the distance to -1.
      return std::pow(to_hi, alpha_) * std::pow(to_lo, beta_);
    case WeightKind::beta01:
      return std::exp((alpha_ - 1.0) * std::log(to_lo) + (beta_ - 1.0) * std::log(to_hi) + log_norm_);
    case WeightKind::tabulated: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return values_.back();
      if (it == xs_.begin()) return values_.front();
      const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
      const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
      return (1.0 - t) * values_[j - 1] + t * values_[j];
    }
  }
  return 0.0;
}

std::optional<WeightFunction::CanonicalJacobi> WeightFunction::canonical() const noexcept {
  switch (kind_) {
    case WeightKind::jacobi:
      return CanonicalJacobi{alpha_, beta_, 1.0};
    case WeightKind::beta01:
      // x = (1+y)/2: x^(a-1) (1-x)^(b-1) dx / B = 2^(1-a-b)/B (1-y)^(b-1) (1+y)^(a-1) dy
      return CanonicalJacobi{beta_ - 1.0, alpha_ - 1.0,
                             std::exp((1.0 - alpha_ - beta_) * std::numbers::ln2 + log_norm_)};
    case WeightKind::tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string WeightFunction::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(kind_);
  if (kind_ == WeightKind::tabulated) {
    out << "(points=" << xs_.size() << ")";
  } else {
    out << "(alpha=" << alpha_ << ", beta=" << beta_ << ")";
  }
  return out.str();
}

WeightFunction make_weight(WeightKind kind, double alpha, double beta) {
  switch (kind) {
    case WeightKind::jacobi:
      return WeightFunction::jacobi(alpha, beta);
    case WeightKind::beta01:
      return WeightFunction::beta01(alpha, beta);
    case WeightKind::tabulated:
      throw ValidationError("tabulated weights are built from a table, not from (alpha, beta)");
  }
  throw ValidationError("unknown weight kind");
}

WeightConstants weight_constants(const WeightFunction& w, double tolerance) {
  const Interval dom = w.domain();
  // Integrate piecewise over the table panels for tabulated weights so the
  // interpolation kinks sit on panel boundaries.
  std::vector<double> breaks{dom.lo, dom.hi};
  if (w.kind() == WeightKind::tabulated) breaks = w.table_x();

  auto integrate = [&](auto&& integrand) {
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
      const double a = breaks[p];
      const double b = breaks[p + 1];
      total += integrate_singular(
          [&](double x, double da, double db) {
            const double to_lo = (a == dom.lo) ? da : x - dom.lo;
            const double to_hi = (b == dom.hi) ? db : dom.hi - x;
            return integrand(x, to_lo, to_hi);
          },
          a, b, tolerance);
    }
    return total;
  };

  WeightConstants c;
  try {
    c.mass = integrate([&](double x, double lo, double hi) { return w.value(x, lo, hi); });
    const double first = integrate([&](double x, double lo, double hi) { return x * w.value(x, lo, hi); });
    c.c1 = first / c.mass;
    const double var = integrate([&](double x, double lo, double hi) {
      const double d = x - c.c1;
      return d * d * w.value(x, lo, hi);
    });
    c.lambda = 1.0 / std::sqrt(var);
    const double half_len = 0.5 * dom.length();
    const double arcsine = integrate([&](double x, double lo, double hi) {
      return w.value(x, lo, hi) / std::sqrt(lo * hi);
    });
    c.k_gamma = half_len * arcsine / (2.0 * std::numbers::pi);
  } catch (const NumericalError& e) {
    throw ValidationError(std::string("inadmissible weight ") + w.describe() +
                          ": defining integral does not converge (" + e.what() + ")");
  }
  if (!(c.mass > 0.0) || !(c.k_gamma > 0.0) || !std::isfinite(c.k_gamma) || !(c.lambda > 0.0)) {
    throw ValidationError("inadmissible weight " + w.describe() + ": nonpositive or infinite constants");
  }
  c.c0 = 1.0 / std::sqrt(c.mass);
  return c;
}

JacobiClosedForms jacobi_closed_forms(double a, double b) {
  JacobiClosedForms f;
  f.mass = std::exp((a + b + 1.0) * std::numbers::ln2 + log_beta(a + 1.0, b + 1.0));
  f.c1 = (b - a) / (a + b + 2.0);
  f.lambda_inv2 = f.mass * 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
  const double poly = 3 * a * a * b + 3 * a * b * b + 3 * a * a + 3 * b * b + 16 * a * b + 14 * a + 14 * b + 12;
  f.lambda_inv2_text = f.mass * poly / ((a + b + 3.0) * (a + b + 2.0) * (a + b + 2.0));
  f.k_gamma_text = std::exp((a + b) * std::numbers::ln2 + log_beta(a + 0.5, b + 0.5)) / std::numbers::pi;
  f.k_gamma = 0.5 * f.k_gamma_text;
  return f;
}

}  // namespace orthoden
