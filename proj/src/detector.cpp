#include "orthoden/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orthoden/error.hpp"

namespace orthoden {

EnergyEstimate window_energy(const SampledSignal& window, const OrthonormalBasis& basis,
                             const DetectorOptions& opts) {
  return weighted_energy(window, basis, EnergyWeight::power(opts.theta), opts.energy);
}

BaselineRegion build_baseline(std::span<const EnergyEstimate> energies, std::size_t window_length, double theta) {
  if (energies.size() < 3) {
    throw ValidationError("baseline needs at least 3 windows, got " + std::to_string(energies.size()));
  }
  const double m = static_cast<double>(energies.size());
  double center = 0.0, s2 = 0.0, k2 = 0.0;
  for (const EnergyEstimate& e : energies) {
    if (e.n != window_length) throw ValidationError("baseline windows have inconsistent lengths");
    center += std::sqrt(std::max(0.0, e.value));
    s2 += e.sigma2_n;
    k2 += e.k_const2;
  }
  center /= m;
  s2 /= m;
  k2 /= m;
  double ss = 0.0;
  for (const EnergyEstimate& e : energies) {
    const double d = std::sqrt(std::max(0.0, e.value)) - center;
    ss += d * d;
  }
  BaselineRegion r;
  r.center = center;
  r.spread_sd = std::sqrt(ss / (m - 1.0));
  r.fisher_radius = 6.0 * std::sqrt(s2 * k2) / std::sqrt(static_cast<double>(window_length));
  r.radius = std::max({r.fisher_radius, 2.0 * r.spread_sd, 1e-12 * std::max(1.0, center)});
  r.built_from = energies.size();
  r.window_length = window_length;
  r.theta = theta;
  return r;
}

BaselineRegion build_baseline(std::span<const SampledSignal> windows, const OrthonormalBasis& basis,
                              const DetectorOptions& opts) {
  if (windows.size() < 3) {
    throw ValidationError("baseline needs at least 3 windows, got " + std::to_string(windows.size()));
  }
  const std::size_t len = windows.front().size();
  std::vector<EnergyEstimate> energies;
  energies.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].size() != len) {
      throw ValidationError("baseline window " + std::to_string(i) + " has length " +
                            std::to_string(windows[i].size()) + ", expected " + std::to_string(len));
    }
    energies.push_back(window_energy(windows[i], basis, opts));
  }
  return build_baseline(energies, len, opts.theta);
}

std::vector<DetectionVerdict> monitor(std::span<const EnergyEstimate> energies, const BaselineRegion& region,
                                      std::size_t alarm_threshold) {
  if (alarm_threshold == 0) throw ValidationError("alarm threshold must be >= 1");
  std::vector<DetectionVerdict> out;
  out.reserve(energies.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    if (energies[i].n != region.window_length) {
      throw ValidationError("stream window " + std::to_string(i) + " has length " + std::to_string(energies[i].n) +
                            ", baseline uses " + std::to_string(region.window_length));
    }
    DetectionVerdict v;
    v.window_index = i;
    v.energy = energies[i].value;
    v.inside = std::abs(std::sqrt(std::max(0.0, v.energy)) - region.center) <= region.radius;
    run = v.inside ? 0 : run + 1;
    v.consecutive_outside = run;
    v.alarm = run >= alarm_threshold;
    out.push_back(v);
  }
  return out;
}

std::vector<DetectionVerdict> monitor(std::span<const SampledSignal> stream, const BaselineRegion& region,
                                      const OrthonormalBasis& basis, const DetectorOptions& opts) {
  std::vector<EnergyEstimate> energies;
  energies.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].size() != region.window_length) {
      throw ValidationError("stream window " + std::to_string(i) + " has length " +
                            std::to_string(stream[i].size()) + ", baseline uses " +
                            std::to_string(region.window_length));
    }
    energies.push_back(window_energy(stream[i], basis, opts));
  }
  return monitor(energies, region, opts.alarm_threshold);
}

std::size_t first_alarm(std::span<const DetectionVerdict> verdicts) noexcept {
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (verdicts[i].alarm) return i;
  }
  return verdicts.size();
}

}  // namespace orthoden
