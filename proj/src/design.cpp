#include "orthoden/design.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "orthoden/error.hpp"

namespace orthoden {

DesignGrid make_grid(std::size_t n, Interval domain) {
  if (n < kMinSampleSize) {
    throw ValidationError("sample size n=" + std::to_string(n) + " is below the minimum of " +
                          std::to_string(kMinSampleSize) + " grid points");
  }
  DesignGrid g;
  g.n = n;
  g.domain = domain;
  g.points.resize(n);
  const double nm1 = static_cast<double>(n - 1);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = (2.0 * static_cast<double>(i) - static_cast<double>(n) - 1.0) / nm1;
    g.points[i - 1] = domain.lo + 0.5 * (x + 1.0) * domain.length();
  }
  g.points.front() = domain.lo;
  g.points.back() = domain.hi;
  return g;
}

std::string_view to_string(NoiseLaw law) {
  switch (law) {
    case NoiseLaw::gaussian:
      return "gaussian";
    case NoiseLaw::uniform:
      return "uniform";
    case NoiseLaw::weibull_tail:
      return "symmetric-weibull-tail";
  }
  return "unknown";
}

NoiseLaw parse_noise_law(std::string_view text) {
  if (text == "gaussian") return NoiseLaw::gaussian;
  if (text == "uniform") return NoiseLaw::uniform;
  if (text == "symmetric-weibull-tail" || text == "weibull") return NoiseLaw::weibull_tail;
  throw ValidationError("unknown noise law '" + std::string(text) + "'");
}

double NoiseModel::tail_probability(double u) const {
  if (u <= 0.0) return 0.5;
  switch (law) {
    case NoiseLaw::gaussian:
      return 0.5 * std::erfc(u / std::sqrt(2.0));
    case NoiseLaw::uniform: {
      const double r3 = std::sqrt(3.0);
      return std::max(0.0, (r3 - u) / (2.0 * r3));
    }
    case NoiseLaw::weibull_tail:
      return 0.5 * std::exp(-std::pow(u / big_q, q));
  }
  return 0.0;
}

double NoiseModel::tail_bound(double u) const { return std::exp(-std::pow(std::max(u, 0.0) / big_q, q)); }

NoiseModel make_noise(NoiseLaw law, double sigma, std::uint64_t seed, double shape) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("noise sigma must be finite and >= 0");
  NoiseModel m;
  m.law = law;
  m.sigma = sigma;
  m.seed = seed;
  switch (law) {
    case NoiseLaw::gaussian:
      m.q = 2.0;
      m.big_q = std::sqrt(2.0);
      break;
    case NoiseLaw::uniform:
      m.q = 2.0;
      m.big_q = 1.0;
      break;
    case NoiseLaw::weibull_tail:
      if (!(shape > 0.0)) throw ValidationError("weibull tail shape must be > 0");
      m.q = shape;
      // E|e|^2 = s^2 Gamma(1 + 2/q) = 1
      m.big_q = 1.0 / std::sqrt(std::tgamma(1.0 + 2.0 / shape));
      break;
  }
  return m;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> draw_unit_noise(const NoiseModel& noise, std::size_t n, std::uint64_t stream) {
  std::mt19937_64 rng(derive_seed(noise.seed, stream));
  std::vector<double> out(n);
  switch (noise.law) {
    case NoiseLaw::gaussian: {
      std::normal_distribution<double> dist(0.0, 1.0);
      for (double& e : out) e = dist(rng);
      break;
    }
    case NoiseLaw::uniform: {
      const double r3 = std::sqrt(3.0);
      std::uniform_real_distribution<double> dist(-r3, r3);
      for (double& e : out) e = dist(rng);
      break;
    }
    case NoiseLaw::weibull_tail: {
      std::weibull_distribution<double> mag(noise.q, noise.big_q);
      std::bernoulli_distribution sign(0.5);
      for (double& e : out) {
        const double v = mag(rng);
        e = sign(rng) ? v : -v;
      }
      break;
    }
  }
  return out;
}

std::vector<double> synth_coefficients(const SpectralDecayModel& m, std::size_t k_max) {
  if (!(m.delta > 0.0)) throw ValidationError("spectral decay exponent delta must be > 0");
  if (m.log_power < -2.0 || m.log_power > 2.0) throw ValidationError("slowly varying power must lie in [-2, 2]");
  std::vector<double> c(k_max);
  std::mt19937_64 rng(derive_seed(m.sign_seed, 0));
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double kk = static_cast<double>(k);
    const double slow = std::pow(1.0 + std::log(kk), m.log_power);
    double sign = 1.0;
    if (m.signs == SignConvention::alternating && k % 2 == 0) sign = -1.0;
    if (m.signs == SignConvention::random && coin(rng)) sign = -1.0;
    c[k - 1] = sign * m.c_scale * std::pow(kk, -m.delta - 0.5) * std::sqrt(slow);
  }
  return c;
}

double tail_energy(std::span<const double> coeffs, std::size_t n_terms) {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k > n_terms; --k) acc += coeffs[k - 1] * coeffs[k - 1];
  return acc;
}

std::string_view to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::plausible:
      return "plausible";
    case TailVerdict::implausible:
      return "implausible";
    case TailVerdict::inapplicable:
      return "inapplicable";
  }
  return "unknown";
}

namespace {

TailRatioReport judge(std::vector<std::size_t> ns, std::vector<double> rho_n, std::vector<double> rho_2n, double lo,
                      double hi) {
  TailRatioReport r;
  r.n_values = std::move(ns);
  bool all_defined = !r.n_values.empty();
  bool all_inside = true;
  for (std::size_t i = 0; i < r.n_values.size(); ++i) {
    if (!(rho_n[i] > 0.0)) {
      r.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      all_defined = false;
      continue;
    }
    const double ratio = rho_2n[i] / rho_n[i];
    r.ratios.push_back(ratio);
    all_inside = all_inside && ratio > lo && ratio < hi;
  }
  if (!all_defined) {
    r.verdict = TailVerdict::inapplicable;
  } else {
    r.verdict = all_inside ? TailVerdict::plausible : TailVerdict::implausible;
  }
  return r;
}

}  // namespace

TailRatioReport tail_ratio_check(const SpectralDecayModel& m, std::span<const std::size_t> n_list, double lo,
                                 double hi) {
  std::size_t n_max = 1;
  for (std::size_t n : n_list) n_max = std::max(n_max, n);
  const std::size_t k_cut = 64 * n_max;
  const std::vector<double> c = synth_coefficients(m, k_cut);
  // Remainder sum_{k > k_cut} c(k)^2 ~ int_{k_cut + 1/2}^inf c(t)^2 dt, written in u = log t.
  boost::math::quadrature::exp_sinh<double> integrator;
  const double u0 = std::log(static_cast<double>(k_cut) + 0.5);
  const double remainder = m.c_scale * m.c_scale * integrator.integrate([&](double s) {
    const double u = u0 + s;
    return std::exp(-2.0 * m.delta * u) * std::pow(1.0 + u, m.log_power);
  });
  std::vector<double> rn;
  std::vector<double> r2n;
  for (std::size_t n : n_list) {
    rn.push_back(tail_energy(c, n) + remainder);
    r2n.push_back(tail_energy(c, 2 * n) + remainder);
  }
  return judge({n_list.begin(), n_list.end()}, std::move(rn), std::move(r2n), lo, hi);
}

TailRatioReport tail_ratio_check(std::span<const double> coeffs, std::span<const std::size_t> n_list, double lo,
                                 double hi) {
  std::vector<double> rn;
  std::vector<double> r2n;
  for (std::size_t n : n_list) {
    rn.push_back(tail_energy(coeffs, n));
    r2n.push_back(tail_energy(coeffs, 2 * n));
  }
  return judge({n_list.begin(), n_list.end()}, std::move(rn), std::move(r2n), lo, hi);
}

std::vector<double> signal_values(std::span<const double> truth, const OrthonormalBasis& basis,
                                  const DesignGrid& grid) {
  if (truth.size() > basis.max_degree()) {
    throw ValidationError("truth has " + std::to_string(truth.size()) + " coefficients, basis holds " +
                          std::to_string(basis.max_degree()));
  }
  const Interval bd = basis.weight().domain();
  if (bd.lo != grid.domain.lo || bd.hi != grid.domain.hi) {
    throw ValidationError("grid domain does not match the weight domain of the basis");
  }
  std::vector<double> f(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) f[i] = basis.series(grid.points[i], truth);
  return f;
}

SampledSignal sample_signal(std::span<const double> truth, const OrthonormalBasis& basis, const DesignGrid& grid,
                            const NoiseModel& noise, std::uint64_t stream) {
  SampledSignal s;
  s.grid = grid;
  s.xi = signal_values(truth, basis, grid);
  if (noise.sigma > 0.0) {
    const std::vector<double> e = draw_unit_noise(noise, grid.n, stream);
    for (std::size_t i = 0; i < grid.n; ++i) s.xi[i] += noise.sigma * e[i];
  }
  s.truth = std::vector<double>(truth.begin(), truth.end());
  s.sigma_true = noise.sigma;
  return s;
}

}  // namespace orthoden
