#include "orthoden/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orthoden/error.hpp"

namespace orthoden {

std::string_view to_string(CorrectionMode m) { return m == CorrectionMode::paper ? "paper" : "corrected"; }

CorrectionMode parse_correction_mode(std::string_view text) {
  if (text == "paper") return CorrectionMode::paper;
  if (text == "corrected") return CorrectionMode::corrected;
  throw ValidationError("unknown correction mode '" + std::string(text) + "'");
}

EnergyWeight EnergyWeight::power(double theta) {
  if (!std::isfinite(theta) || theta < 0.0) {
    throw ValidationError("energy weight exponent theta must be finite and >= 0, got " + std::to_string(theta));
  }
  EnergyWeight w;
  w.theta_ = theta;
  return w;
}

EnergyWeight EnergyWeight::tabulated(std::vector<double> table) {
  if (table.empty()) throw ValidationError("tabulated energy weight is empty");
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (!std::isfinite(table[k]) || table[k] <= 0.0) {
      throw ValidationError("tabulated energy weight w(" + std::to_string(k + 1) + ") must be finite and > 0");
    }
  }
  EnergyWeight w;
  w.table_ = std::move(table);
  return w;
}

double EnergyWeight::operator()(std::size_t k) const {
  if (k == 0) throw ValidationError("energy weight index is 1-based");
  if (!table_.empty()) {
    if (k > table_.size()) {
      throw ValidationError("tabulated energy weight has " + std::to_string(table_.size()) + " entries, w(" +
                            std::to_string(k) + ") requested");
    }
    return table_[k - 1];
  }
  if (theta_ == 0.0) return 1.0;
  return std::pow(static_cast<double>(k), theta_);
}

namespace {

struct CoreInput {
  std::span<const double> c;      // c(1..2N, n) at least
  std::size_t order = 0;          // N
  const EnergyWeight* w = nullptr;
  std::span<const double> s;      // noise factors s_1..s_2N (exact mode)
  double k_gamma = 0.0;
  double sigma2 = 0.0;
  std::size_t n = 0;
  double tau = 0.0;
  EnergyKind kind = EnergyKind::ordinary;
  CorrectionMode correction = CorrectionMode::corrected;
  VarianceMode mode = VarianceMode::exact_design;
};

EnergyEstimate energy_core(const CoreInput& in) {
  const std::size_t big_n = in.order;
  if (big_n == 0 || in.c.size() < big_n) throw ValidationError("energy: not enough coefficients");
  const bool exact = in.mode == VarianceMode::exact_design;
  if (exact && in.s.size() < 2 * big_n) throw ValidationError("energy: not enough noise factors");
  const double k2 = in.k_gamma * in.k_gamma;
  const double n = static_cast<double>(in.n);
  const double s2 = in.sigma2;
  auto factor = [&](std::size_t k) { return exact ? in.s[k - 1] : k2; };

  double head = 0.0, head_noise = 0.0, tail_noise = 0.0;
  double w2c2 = 0.0, w2sc2 = 0.0, w2s2 = 0.0, w2 = 0.0;
  for (std::size_t k = 1; k <= big_n; ++k) {
    const double wk = (*in.w)(k);
    const double c2 = in.c[k - 1] * in.c[k - 1];
    const double sk = factor(k);
    head += wk * c2;
    head_noise += wk * sk;
    w2c2 += wk * wk * c2;
    w2sc2 += wk * wk * sk * c2;
    w2s2 += wk * wk * sk * sk;
    w2 += wk * wk;
  }
  for (std::size_t k = big_n + 1; k <= 2 * big_n; ++k) tail_noise += (*in.w)(k) * factor(k);

  EnergyEstimate e;
  e.kind = in.kind;
  e.correction = in.correction;
  e.mode = in.mode;
  e.order_used = big_n;
  e.n = in.n;
  e.sigma2_n = s2;
  e.tau_star = in.tau;
  if (in.correction == CorrectionMode::paper) {
    const double m = in.kind == EnergyKind::ordinary ? static_cast<double>(big_n) : 1.0;
    e.truncated_value = head - m * k2 * s2 / n;
    e.value = e.truncated_value + in.tau;
  } else {
    e.truncated_value = head - s2 * head_noise / n;
    e.value = e.truncated_value + std::max(0.0, in.tau - s2 * tail_noise / n);
  }
  e.negative = e.value < 0.0;

  if (exact) {
    e.variance = 4.0 * s2 * w2sc2 / n + 2.0 * s2 * s2 * w2s2 / (n * n);
    e.k_const2 = w2c2 > 0.0 ? w2sc2 / w2c2 : head_noise / static_cast<double>(big_n);
  } else {
    if (in.kind == EnergyKind::ordinary) {
      e.variance = 4.0 * s2 * k2 * std::max(0.0, e.value) / n;
    } else {
      e.variance = 4.0 * s2 * k2 * w2c2 / n + 3.0 * s2 * s2 * k2 * k2 * w2 / (n * n);
    }
    e.k_const2 = k2;
  }
  const double sd = std::sqrt(std::max(0.0, e.variance));
  e.ci_lo = e.value - 1.96 * sd;
  e.ci_hi = e.value + 1.96 * sd;
  if (!std::isfinite(e.value) || !std::isfinite(e.variance)) throw NumericalError("energy: non-finite estimate");
  return e;
}

}  // namespace

EnergyEstimate ordinary_energy(const DenoiseResult& r, CorrectionMode correction) {
  if (r.m_n == 0 || r.coeffs.k_max() < r.m_n) throw ValidationError("ordinary_energy: empty denoise result");
  static const EnergyWeight unit = EnergyWeight::power(0.0);
  CoreInput in;
  in.c = r.coeffs.values;
  in.order = r.m_n;
  in.w = &unit;
  in.s = r.noise_factors;
  in.k_gamma = r.k_gamma;
  in.sigma2 = r.sigma2_n;
  in.n = r.n;
  in.tau = r.tau_star;
  in.kind = EnergyKind::ordinary;
  in.correction = correction;
  in.mode = r.mode;
  return energy_core(in);
}

FisherInterval fisher_interval(const EnergyEstimate& e, std::size_t n, double sigma2_n, double k_const) {
  if (n == 0) throw ValidationError("fisher_interval: n must be positive");
  if (!(sigma2_n >= 0.0) || !(k_const >= 0.0)) throw ValidationError("fisher_interval: negative scale");
  FisherInterval f;
  f.clipped = e.value < 0.0;
  f.center_sqrt = std::sqrt(std::max(0.0, e.value));
  f.radius_sqrt = 6.0 * std::sqrt(sigma2_n) * k_const / std::sqrt(static_cast<double>(n));
  f.lo_sqrt = std::max(0.0, f.center_sqrt - f.radius_sqrt);
  f.hi_sqrt = f.center_sqrt + f.radius_sqrt;
  f.lo = f.lo_sqrt * f.lo_sqrt;
  f.hi = f.hi_sqrt * f.hi_sqrt;
  return f;
}

FisherInterval fisher_interval(const EnergyEstimate& e) {
  return fisher_interval(e, e.n, e.sigma2_n, std::sqrt(e.k_const2));
}

double weighted_energy_truth(std::span<const double> truth, const EnergyWeight& w) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= truth.size(); ++k) acc += w(k) * truth[k - 1] * truth[k - 1];
  return acc;
}

double tau_w(const CoefficientSet& c, const EnergyWeight& w, std::size_t big_n) {
  if (big_n == 0 || 2 * big_n > c.k_max()) {
    throw ValidationError("tau_w window (" + std::to_string(big_n) + ", " + std::to_string(2 * big_n) +
                          "] exceeds the " + std::to_string(c.k_max()) + " available coefficients");
  }
  long double acc = 0.0L;
  for (std::size_t k = big_n + 1; k <= 2 * big_n; ++k) {
    const long double v = c.values[k - 1];
    acc += static_cast<long double>(w(k)) * v * v;
  }
  return static_cast<double>(acc);
}

std::size_t select_order_w(const CoefficientSet& c, const EnergyWeight& w, std::size_t n) {
  if (n < kMinSampleSize) throw ValidationError("select_order_w: n=" + std::to_string(n) + " is below 15");
  const std::size_t n_hi = n / 3;
  if (c.k_max() < 2 * n_hi) {
    throw ValidationError("select_order_w: needs 2*floor(n/3)=" + std::to_string(2 * n_hi) +
                          " coefficients, got " + std::to_string(c.k_max()));
  }
  // Same prefix-sum arithmetic as select_order so that w = 1 picks the same N.
  std::vector<long double> prefix(2 * n_hi + 1, 0.0L);
  for (std::size_t k = 1; k <= 2 * n_hi; ++k) {
    const long double v = c.values[k - 1];
    const double wk = w(k);
    prefix[k] = prefix[k - 1] + (wk == 1.0 ? v * v : static_cast<long double>(wk) * v * v);
  }
  std::size_t best = 1;
  double best_t = static_cast<double>(prefix[2] - prefix[1]);
  for (std::size_t big_n = 2; big_n <= n_hi; ++big_n) {
    const double t = static_cast<double>(prefix[2 * big_n] - prefix[big_n]);
    if (t < best_t) {
      best_t = t;
      best = big_n;
    }
  }
  return best;
}

EnergyEstimate weighted_energy_from(const SampledSignal& s, const OrthonormalBasis& basis,
                                    const CoefficientSet& full, const DenoiseResult& base, const EnergyWeight& w,
                                    CorrectionMode correction) {
  const std::size_t n = s.size();
  const std::size_t big_n = select_order_w(full, w, n);
  std::vector<long double> prefix(2 * big_n + 1, 0.0L);
  for (std::size_t k = 1; k <= 2 * big_n; ++k) {
    const long double v = full.values[k - 1];
    const double wk = w(k);
    prefix[k] = prefix[k - 1] + (wk == 1.0 ? v * v : static_cast<long double>(wk) * v * v);
  }
  std::vector<double> factors;
  if (base.mode == VarianceMode::exact_design) {
    factors = design_variances(basis, s.grid, 2 * big_n);
    for (double& f : factors) f = full.scale * full.scale * f;
  }
  CoreInput in;
  in.c = full.values;
  in.order = big_n;
  in.w = &w;
  in.s = factors;
  in.k_gamma = base.k_gamma;
  in.sigma2 = base.sigma2_n;
  in.n = n;
  in.tau = static_cast<double>(prefix[2 * big_n] - prefix[big_n]);
  in.kind = EnergyKind::weighted;
  in.correction = correction;
  in.mode = base.mode;
  return energy_core(in);
}

EnergyEstimate weighted_energy(const SampledSignal& s, const OrthonormalBasis& basis, const EnergyWeight& w,
                               const EnergyOptions& opts) {
  const std::size_t n = s.size();
  if (n < kMinSampleSize) throw ValidationError("weighted_energy: n=" + std::to_string(n) + " is below 15");
  const std::size_t cap = coefficient_cap(n);
  if (basis.max_degree() < cap) {
    throw ValidationError("weighted_energy: basis holds " + std::to_string(basis.max_degree()) +
                          " functions, 2*floor(n/3)=" + std::to_string(cap) + " are needed");
  }
  const CoefficientSet full = empirical_coefficients(s, basis, cap, opts.denoise.normalization);
  const DenoiseResult base = denoise_from_coefficients(s, basis, full, opts.denoise);
  return weighted_energy_from(s, basis, full, base, w, opts.correction);
}

}  // namespace orthoden
