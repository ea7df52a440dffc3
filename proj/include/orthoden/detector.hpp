#ifndef ORTHODEN_DETECTOR_HPP
#define ORTHODEN_DETECTOR_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "orthoden/energy.hpp"

namespace orthoden {

struct DetectorOptions {
  double theta = 0.0;
  std::size_t alarm_threshold = 2;
  EnergyOptions energy{};
};

/// Confidence region for sqrt(energy) built from stationary windows.
struct BaselineRegion {
  double center = 0.0;         ///< mean sqrt(energy) over the baseline windows
  double radius = 0.0;         ///< max(fisher_radius, 2 * spread_sd), floored above 0
  double fisher_radius = 0.0;  ///< 6 sigma k / sqrt(n) from the pooled sigma^2(n)
  double spread_sd = 0.0;      ///< sample SD of the baseline sqrt energies
  std::size_t built_from = 0;
  std::size_t window_length = 0;
  double theta = 0.0;
};

struct DetectionVerdict {
  std::size_t window_index = 0;  ///< 0-based position in the stream
  double energy = 0.0;
  bool inside = true;
  std::size_t consecutive_outside = 0;
  bool alarm = false;
};

/// Energy estimate of a single window with the detector's order theta.
EnergyEstimate window_energy(const SampledSignal& window, const OrthonormalBasis& basis,
                             const DetectorOptions& opts);

/// Needs at least 3 windows of one common length.
BaselineRegion build_baseline(std::span<const SampledSignal> windows, const OrthonormalBasis& basis,
                              const DetectorOptions& opts = {});
BaselineRegion build_baseline(std::span<const EnergyEstimate> energies, std::size_t window_length, double theta);

/// Verdicts in stream order. The alarm is raised once consecutive_outside
/// reaches the threshold and stays raised while the run continues.
std::vector<DetectionVerdict> monitor(std::span<const SampledSignal> stream, const BaselineRegion& region,
                                      const OrthonormalBasis& basis, const DetectorOptions& opts = {});
std::vector<DetectionVerdict> monitor(std::span<const EnergyEstimate> energies, const BaselineRegion& region,
                                      std::size_t alarm_threshold);

/// Index of the first alarmed verdict, or verdicts.size() if none.
std::size_t first_alarm(std::span<const DetectionVerdict> verdicts) noexcept;

}  // namespace orthoden

#endif  // ORTHODEN_DETECTOR_HPP
