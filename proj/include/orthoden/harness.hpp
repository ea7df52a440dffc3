#ifndef ORTHODEN_HARNESS_HPP
#define ORTHODEN_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "orthoden/detector.hpp"
#include "orthoden/energy.hpp"
#include "orthoden/stats.hpp"
#include "orthoden/uncertainty.hpp"

namespace orthoden {

enum class StudyKind { rate, coverage, constants, energy_rate, detector };
std::string_view to_string(StudyKind k);
StudyKind parse_study_kind(std::string_view text);

struct ExperimentConfig {
  StudyKind study = StudyKind::rate;
  std::vector<std::size_t> n_list{1000, 4000, 16000};
  std::size_t replications = 100;

  // truth f with c(k) = sign * c_scale * k^(-delta-1/2) * sqrt((1 + log k)^log_power)
  double delta = 1.0;
  double log_power = 0.0;
  SignConvention signs = SignConvention::random;
  double c_scale = 1.0;
  std::size_t truth_length = 2000;

  double theta = 0.0;
  WeightKind weight = WeightKind::jacobi;
  double alpha = -0.25;
  double beta = -0.25;

  double sigma = 0.2;
  NoiseLaw law = NoiseLaw::gaussian;
  double noise_shape = 1.5;
  std::uint64_t seed = 1;

  VarianceMode mode = VarianceMode::exact_design;
  CorrectionMode correction = CorrectionMode::corrected;
  Normalization normalization = Normalization::grid_consistent;

  std::size_t threads = 0;  ///< 0: hardware concurrency

  // targets
  double slope_tolerance = 0.15;
  double oracle_ratio_max = 10.0;
  double bound_coverage_min = 0.85;
  double fisher_coverage_min = 0.90;
  double energy_slope_max = -0.7;
  double sigma_rel_tol = 0.10;
  double sigma_fraction_min = 0.95;
  double y2_variation_max = 0.30;
  std::size_t probe_k = 20;

  // detector study
  std::size_t window_length = 2000;
  std::size_t baseline_windows = 10;
  std::size_t stream_windows = 20;
  std::size_t fault_start = 10;  ///< 0-based first faulty window
  double fault_amplitude = 2.0;
  std::size_t alarm_threshold = 2;
  double detection_rate_min = 0.95;
  double false_alarm_max = 0.05;
};

/// Throws ValidationError on inconsistent settings.
void validate(const ExperimentConfig& cfg);

/// One Monte Carlo replication at one sample size.
struct ReplicationRecord {
  std::size_t n = 0;
  std::size_t replication = 0;
  std::size_t m_n = 0;
  double loss = 0.0;  ///< ||f_hat - f||^2_gamma
  double tau_star = 0.0;
  double bound95 = 0.0;
  double rho_hat = 0.0;
  double sigma2_n = 0.0;
  double energy = 0.0;          ///< ordinary G(n)
  double energy_variance = 0.0;
  bool fisher_covers = false;   ///< sqrt(G) inside the Fisher interval
  std::size_t order_w = 0;      ///< N_w
  double weighted_energy = 0.0;
  double eta = 0.0;             ///< sqrt(n) (c(probe_k, n) - E c(probe_k, n)) / (sigma * scale)
};

struct CellSummary {
  std::size_t n = 0;
  std::size_t replications = 0;
  double loss_mean = 0.0;
  double loss_median = 0.0;
  double loss_q10 = 0.0;
  double loss_q90 = 0.0;
  double order_median = 0.0;
  double oracle_a_star = 0.0;
  std::size_t oracle_n0 = 0;
  double median_over_oracle = 0.0;
  double tau_over_oracle_median = 0.0;  ///< tau* / A*
  double tau_over_oracle_q90 = 0.0;
  double loss_over_tau_median = 0.0;    ///< ||f_hat - f||^2 / tau*
  double loss_over_tau_q90 = 0.0;
  stats::Proportion bound_coverage;
  stats::Proportion fisher_coverage;
  stats::Proportion sigma_within;
  double sigma2_median = 0.0;
  double energy_truth = 0.0;
  double energy_mean = 0.0;
  double energy_mc_se = 0.0;
  double energy_variance_ratio = 0.0;   ///< empirical Var G(n) / (4 sigma^2 K^2 G / n)
  double energy_design_ratio = 0.0;     ///< empirical Var G(n) / mean exact-design plug-in variance
  double rho_at_order_median = 0.0;     ///< median rho(M(n)) of the truth
  stats::NormalityTest energy_normality;
  double weighted_truth = 0.0;
  double weighted_mse = 0.0;
  double order_w_median = 0.0;
  double eta_variance = 0.0;            ///< empirical n Var c(k, n) / (sigma scale)^2
  double eta_design = 0.0;              ///< v_k(n) at the probe index
};

struct SlopeFit {
  std::string name;
  stats::LinearFit fit;
};

struct Verdict {
  std::string criterion;
  std::string quantity;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::size_t sample_size = 0;
  bool pass = false;
};

struct DetectorSummary {
  std::size_t streams = 0;
  stats::Proportion detected;      ///< alarm within 2 windows of the fault
  stats::Proportion false_alarms;  ///< any alarm on a stationary stream
  double median_latency = 0.0;     ///< windows from fault start to first alarm, counting the fault window
  double median_radius = 0.0;
  double median_center = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  double k_gamma = 0.0;
  std::vector<CellSummary> cells;
  std::vector<SlopeFit> fits;
  std::vector<Verdict> verdicts;
  std::vector<std::vector<ReplicationRecord>> records;  ///< per cell, replication order
  std::optional<DetectorSummary> detector;

  bool all_pass() const noexcept;
};

/// Basis shared across studies; built for the largest n of the config.
std::shared_ptr<const OrthonormalBasis> study_basis(const ExperimentConfig& cfg);

/// Records for every (n, replication) cell in order. The basis must hold
/// at least max(2 floor(n/3), truth_length) functions.
std::vector<std::vector<ReplicationRecord>> run_replications(const ExperimentConfig& cfg,
                                                             const OrthonormalBasis& basis);

ExperimentReport run_rate_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis);
ExperimentReport run_coverage_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis);
ExperimentReport run_constant_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis);
ExperimentReport run_energy_rate_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis);
ExperimentReport run_detector_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis);

/// Dispatches on cfg.study.
ExperimentReport run_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis);
ExperimentReport run_study(const ExperimentConfig& cfg);

/// Noiseless coefficient error |c_n(k) - c(k)| for a finite-series truth.
struct RiemannStudy {
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> k_list;
  std::vector<std::vector<double>> errors;  ///< errors[i][j] at n_list[i], k_list[j]
  double fitted_c = 0.0;                    ///< max_j |err| n / k at the largest n
  std::vector<SlopeFit> slopes;             ///< log |err| vs log n for each k
};

RiemannStudy run_riemann_study(std::span<const double> truth, const OrthonormalBasis& basis,
                               std::span<const std::size_t> n_list, std::span<const std::size_t> k_list,
                               Normalization norm = Normalization::grid_consistent);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0: hardware).
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace orthoden

#endif  // ORTHODEN_HARNESS_HPP
