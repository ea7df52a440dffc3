#include "orthoden/harness.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "orthoden/error.hpp"

namespace orthoden {

std::string_view to_string(StudyKind k) {
  switch (k) {
    case StudyKind::rate: return "rate";
    case StudyKind::coverage: return "coverage";
    case StudyKind::constants: return "constants";
    case StudyKind::energy_rate: return "energy-rate";
    case StudyKind::detector: return "detector";
  }
  return "rate";
}

StudyKind parse_study_kind(std::string_view text) {
  if (text == "rate") return StudyKind::rate;
  if (text == "coverage") return StudyKind::coverage;
  if (text == "constants") return StudyKind::constants;
  if (text == "energy-rate") return StudyKind::energy_rate;
  if (text == "detector") return StudyKind::detector;
  throw ValidationError("unknown study '" + std::string(text) + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.study == StudyKind::detector) {
    if (cfg.window_length < kMinSampleSize) throw ValidationError("window_length below 15");
    if (cfg.baseline_windows < 3) throw ValidationError("baseline_windows must be >= 3");
    if (cfg.fault_start + 1 >= cfg.stream_windows) {
      throw ValidationError("fault_start must leave at least two faulty windows in the stream");
    }
    if (cfg.alarm_threshold == 0) throw ValidationError("alarm_threshold must be >= 1");
  } else {
    if (cfg.n_list.empty()) throw ValidationError("n_list is empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      if (cfg.n_list[i] < kMinSampleSize) throw ValidationError("n_list entries must be >= 15");
      if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) throw ValidationError("n_list must be strictly increasing");
    }
    const bool slopes = cfg.study == StudyKind::rate || cfg.study == StudyKind::energy_rate;
    if (slopes && cfg.replications < 50) throw ValidationError("rate studies need >= 50 replications");
  }
  if (cfg.replications < 2) throw ValidationError("replications must be >= 2");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) throw ValidationError("sigma must be finite and >= 0");
  if (!(cfg.theta >= 0.0)) throw ValidationError("theta must be >= 0");
  if (cfg.truth_length == 0) throw ValidationError("truth_length must be positive");
  if (cfg.probe_k == 0) throw ValidationError("probe_k must be positive");
}

bool ExperimentReport::all_pass() const noexcept {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

std::vector<double> study_truth(const ExperimentConfig& cfg) {
  SpectralDecayModel m;
  m.delta = cfg.delta;
  m.log_power = cfg.log_power;
  m.signs = cfg.signs;
  m.c_scale = cfg.c_scale;
  m.sign_seed = cfg.seed;
  return synth_coefficients(m, cfg.truth_length);
}

std::size_t needed_degree(const ExperimentConfig& cfg) {
  std::size_t n_max = cfg.study == StudyKind::detector ? cfg.window_length : cfg.n_list.back();
  return std::max({coefficient_cap(n_max), cfg.truth_length, cfg.probe_k});
}

void check_basis(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  if (basis.max_degree() < needed_degree(cfg)) {
    throw ValidationError("study basis holds " + std::to_string(basis.max_degree()) + " functions, " +
                          std::to_string(needed_degree(cfg)) + " are needed");
  }
}

Eigen::MatrixXd noise_matrix(const NoiseModel& noise, std::size_t n, std::size_t cols, std::size_t threads) {
  Eigen::MatrixXd e(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  parallel_for(cols, threads, [&](std::size_t r) {
    const std::vector<double> d = draw_unit_noise(noise, n, r);
    std::copy(d.begin(), d.end(), e.col(static_cast<Eigen::Index>(r)).data());
  });
  return e;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

std::vector<double> extract(const std::vector<ReplicationRecord>& rs, double ReplicationRecord::*field) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const ReplicationRecord& r : rs) out.push_back(r.*field);
  return out;
}

double variance(std::span<const double> x) {
  const double s = stats::stddev(x);
  return s * s;
}

}  // namespace

std::shared_ptr<const OrthonormalBasis> study_basis(const ExperimentConfig& cfg) {
  validate(cfg);
  return std::make_shared<const OrthonormalBasis>(
      build_basis(make_weight(cfg.weight, cfg.alpha, cfg.beta), needed_degree(cfg)));
}

std::vector<std::vector<ReplicationRecord>> run_replications(const ExperimentConfig& cfg,
                                                             const OrthonormalBasis& basis) {
  validate(cfg);
  check_basis(cfg, basis);
  const std::vector<double> truth = study_truth(cfg);
  double g_true = 0.0;
  for (double c : truth) g_true += c * c;
  const EnergyWeight w = EnergyWeight::power(cfg.theta);
  const DenoiseOptions dopts{cfg.normalization, cfg.mode};

  std::vector<std::vector<ReplicationRecord>> out;
  for (std::size_t n : cfg.n_list) {
    const DesignGrid grid = make_grid(n, basis.weight().domain());
    const std::size_t cap = coefficient_cap(n);
    const double scale = normalization_scale(cfg.normalization, grid.domain);
    const std::vector<double> f = signal_values(truth, basis, grid);
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(n));
    const NoiseModel noise = make_noise(cfg.law, cfg.sigma, derive_seed(cfg.seed, n), cfg.noise_shape);
    const std::size_t reps = cfg.replications;

    Eigen::MatrixXd xi = noise_matrix(noise, n, reps, cfg.threads);
    xi *= cfg.sigma;
    xi.colwise() += fv;
    const Eigen::MatrixXd coeffs = project_columns(basis, grid, xi, cap, scale);
    const std::size_t probe = std::min(cfg.probe_k, cap);
    const Eigen::MatrixXd mean_c = project_columns(basis, grid, Eigen::MatrixXd(fv), probe, scale);
    const double eta_center = mean_c(static_cast<Eigen::Index>(probe - 1), 0);

    std::vector<ReplicationRecord> records(reps);
    parallel_for(reps, cfg.threads, [&](std::size_t r) {
      const Eigen::Index c = static_cast<Eigen::Index>(r);
      SampledSignal s;
      s.grid = grid;
      s.xi = column(xi, c);
      s.sigma_true = cfg.sigma;
      CoefficientSet full{column(coeffs, c), CoefficientKind::empirical, n, scale};
      const DenoiseResult d = denoise_from_coefficients(s, basis, full, dopts);
      ReplicationRecord& rec = records[r];
      rec.n = n;
      rec.replication = r;
      rec.m_n = d.m_n;
      rec.loss = true_error(d, truth);
      rec.tau_star = d.tau_star;
      rec.sigma2_n = d.sigma2_n;
      const ConfidenceReport conf = confidence_report(d);
      rec.bound95 = conf.bound95;
      rec.rho_hat = conf.rho_hat;
      const EnergyEstimate e = ordinary_energy(d, cfg.correction);
      rec.energy = e.value;
      rec.energy_variance = e.variance;
      const FisherInterval fi = fisher_interval(e);
      const double root = std::sqrt(g_true);
      rec.fisher_covers = fi.lo_sqrt <= root && root <= fi.hi_sqrt;
      const EnergyEstimate we = weighted_energy_from(s, basis, full, d, w, cfg.correction);
      rec.order_w = we.order_used;
      rec.weighted_energy = we.value;
      if (cfg.sigma > 0.0) {
        rec.eta = std::sqrt(static_cast<double>(n)) * (coeffs(static_cast<Eigen::Index>(probe - 1), c) - eta_center) /
                  (cfg.sigma * scale);
      }
    });
    out.push_back(std::move(records));
  }
  return out;
}

namespace {

CellSummary summarize(const ExperimentConfig& cfg, const OrthonormalBasis& basis, std::span<const double> truth,
                      const std::vector<ReplicationRecord>& rs) {
  CellSummary c;
  c.n = rs.front().n;
  c.replications = rs.size();
  const double n = static_cast<double>(c.n);
  const std::vector<double> loss = extract(rs, &ReplicationRecord::loss);
  c.loss_mean = stats::mean(loss);
  c.loss_median = stats::median(loss);
  c.loss_q10 = stats::quantile(loss, 0.1);
  c.loss_q90 = stats::quantile(loss, 0.9);

  std::vector<double> orders, orders_w, rho_m;
  for (const ReplicationRecord& r : rs) {
    orders.push_back(static_cast<double>(r.m_n));
    orders_w.push_back(static_cast<double>(r.order_w));
    rho_m.push_back(tail_energy(truth, r.m_n));
  }
  c.order_median = stats::median(orders);
  c.order_w_median = stats::median(orders_w);
  c.rho_at_order_median = stats::median(rho_m);

  const OracleReport oracle = oracle_curve(truth, c.n);
  c.oracle_a_star = oracle.a_star;
  c.oracle_n0 = oracle.n0;
  c.median_over_oracle = c.loss_median / oracle.a_star;

  std::vector<double> y1, y2;
  std::size_t bound_hits = 0, fisher_hits = 0, sigma_hits = 0;
  const double s2 = cfg.sigma * cfg.sigma;
  for (const ReplicationRecord& r : rs) {
    y1.push_back(r.tau_star / oracle.a_star);
    if (r.tau_star > 0.0) y2.push_back(r.loss / r.tau_star);
    if (r.loss <= r.bound95) ++bound_hits;
    if (r.fisher_covers) ++fisher_hits;
    if (s2 > 0.0 ? std::abs(r.sigma2_n / s2 - 1.0) <= cfg.sigma_rel_tol : r.sigma2_n == 0.0) ++sigma_hits;
  }
  c.tau_over_oracle_median = stats::median(y1);
  c.tau_over_oracle_q90 = stats::quantile(y1, 0.9);
  if (!y2.empty()) {
    c.loss_over_tau_median = stats::median(y2);
    c.loss_over_tau_q90 = stats::quantile(y2, 0.9);
  }
  c.bound_coverage = stats::wilson(bound_hits, rs.size());
  c.fisher_coverage = stats::wilson(fisher_hits, rs.size());
  c.sigma_within = stats::wilson(sigma_hits, rs.size());
  c.sigma2_median = stats::median(extract(rs, &ReplicationRecord::sigma2_n));

  double g = 0.0;
  for (double v : truth) g += v * v;
  c.energy_truth = g;
  const std::vector<double> energy = extract(rs, &ReplicationRecord::energy);
  c.energy_mean = stats::mean(energy);
  const double sd = stats::stddev(energy);
  c.energy_mc_se = sd / std::sqrt(static_cast<double>(rs.size()));
  const double k2 = basis.constants().k_gamma * basis.constants().k_gamma;
  if (s2 > 0.0 && g > 0.0) c.energy_variance_ratio = sd * sd / (4.0 * s2 * k2 * g / n);
  const double plug = stats::mean(extract(rs, &ReplicationRecord::energy_variance));
  if (plug > 0.0) c.energy_design_ratio = sd * sd / plug;
  if (sd > 0.0 && rs.size() >= 8) c.energy_normality = stats::anderson_darling(energy);

  c.weighted_truth = weighted_energy_truth(truth, EnergyWeight::power(cfg.theta));
  double mse = 0.0;
  for (const ReplicationRecord& r : rs) mse += (r.weighted_energy - c.weighted_truth) * (r.weighted_energy - c.weighted_truth);
  c.weighted_mse = mse / static_cast<double>(rs.size());

  if (cfg.sigma > 0.0) c.eta_variance = variance(extract(rs, &ReplicationRecord::eta));
  const DesignGrid grid = make_grid(c.n, basis.weight().domain());
  c.eta_design = design_variance(basis, grid, std::min(cfg.probe_k, coefficient_cap(c.n)));
  return c;
}

ExperimentReport base_report(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  ExperimentReport rep;
  rep.config = cfg;
  rep.k_gamma = basis.constants().k_gamma;
  rep.records = run_replications(cfg, basis);
  const std::vector<double> truth = study_truth(cfg);
  for (const auto& rs : rep.records) rep.cells.push_back(summarize(cfg, basis, truth, rs));
  return rep;
}

std::vector<double> cell_values(const ExperimentReport& rep, double CellSummary::*field) {
  std::vector<double> out;
  for (const CellSummary& c : rep.cells) out.push_back(c.*field);
  return out;
}

std::vector<double> cell_ns(const ExperimentReport& rep) {
  std::vector<double> out;
  for (const CellSummary& c : rep.cells) out.push_back(static_cast<double>(c.n));
  return out;
}

std::size_t total_reps(const ExperimentReport& rep) {
  std::size_t t = 0;
  for (const CellSummary& c : rep.cells) t += c.replications;
  return t;
}

}  // namespace

ExperimentReport run_rate_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  ExperimentReport rep = base_report(cfg, basis);
  const double target = -2.0 * cfg.delta / (2.0 * cfg.delta + 1.0);
  if (rep.cells.size() >= 2) {
    const stats::LinearFit fit = stats::loglog_fit(cell_ns(rep), cell_values(rep, &CellSummary::loss_median));
    rep.fits.push_back({"median_loss_vs_n", fit});
    rep.fits.push_back(
        {"oracle_risk_vs_n", stats::loglog_fit(cell_ns(rep), cell_values(rep, &CellSummary::oracle_a_star))});
    rep.verdicts.push_back({"adaptive-rate", "loglog slope of median loss", fit.slope, target, cfg.slope_tolerance,
                            total_reps(rep), std::abs(fit.slope - target) <= cfg.slope_tolerance});
  }
  for (const CellSummary& c : rep.cells) {
    rep.verdicts.push_back({"adaptive-rate", "median loss / oracle risk at n=" + std::to_string(c.n),
                            c.median_over_oracle, cfg.oracle_ratio_max, 0.0, c.replications,
                            c.median_over_oracle <= cfg.oracle_ratio_max});
  }
  return rep;
}

ExperimentReport run_coverage_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  ExperimentReport rep = base_report(cfg, basis);
  for (const CellSummary& c : rep.cells) {
    const std::string at = " at n=" + std::to_string(c.n);
    rep.verdicts.push_back({"confidence-coverage", "bound95 coverage" + at, c.bound_coverage.estimate,
                            cfg.bound_coverage_min, 0.0, c.replications,
                            c.bound_coverage.estimate >= cfg.bound_coverage_min});
    rep.verdicts.push_back({"energy-clt", "Fisher interval coverage" + at, c.fisher_coverage.estimate,
                            cfg.fisher_coverage_min, 0.0, c.replications,
                            c.fisher_coverage.estimate >= cfg.fisher_coverage_min});
    rep.verdicts.push_back({"energy-clt", "Anderson-Darling statistic of G(n)" + at, c.energy_normality.statistic,
                            c.energy_normality.critical_value, 0.0, c.replications, c.energy_normality.pass});
    rep.verdicts.push_back({"variance-estimator", "fraction of sigma^2(n) within tolerance" + at,
                            c.sigma_within.estimate, cfg.sigma_fraction_min, cfg.sigma_rel_tol, c.replications,
                            c.sigma_within.estimate >= cfg.sigma_fraction_min});
  }
  return rep;
}

ExperimentReport run_constant_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  ExperimentReport rep = base_report(cfg, basis);
  const double kg = rep.k_gamma;
  double y1_max = 0.0;
  for (const CellSummary& c : rep.cells) y1_max = std::max(y1_max, c.tau_over_oracle_median);
  rep.verdicts.push_back({"constants", "max median tau*/A* over cells", y1_max, 0.0, 0.0, total_reps(rep),
                          std::isfinite(y1_max)});
  if (rep.cells.size() >= 2) {
    const CellSummary& a = rep.cells[rep.cells.size() - 2];
    const CellSummary& b = rep.cells.back();
    const double var = std::abs(b.loss_over_tau_median / a.loss_over_tau_median - 1.0);
    rep.verdicts.push_back({"constants", "relative change of median loss/tau* between the last two cells", var,
                            cfg.y2_variation_max, 0.0, a.replications + b.replications,
                            std::isfinite(var) && var < cfg.y2_variation_max});
  }
  if (cfg.sigma > 0.0) {
    const CellSummary& c = rep.cells.back();
    // grid-corrected K(gamma) against twice that value
    const bool closer = std::abs(c.eta_variance - kg) < std::abs(c.eta_variance - 2.0 * kg);
    rep.verdicts.push_back({"constants", "per-coefficient noise variance at k=" + std::to_string(cfg.probe_k),
                            c.eta_variance, kg, kg / 2.0, c.replications, closer});
  }
  return rep;
}

ExperimentReport run_energy_rate_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  ExperimentReport rep = base_report(cfg, basis);
  if (rep.cells.size() >= 2) {
    const stats::LinearFit fit = stats::loglog_fit(cell_ns(rep), cell_values(rep, &CellSummary::weighted_mse));
    rep.fits.push_back({"weighted_energy_mse_vs_n", fit});
    rep.verdicts.push_back({"weighted-energy-rate", "loglog slope of weighted-energy MSE", fit.slope,
                            cfg.energy_slope_max, 0.0, total_reps(rep), fit.slope <= cfg.energy_slope_max});
  }
  return rep;
}

ExperimentReport run_detector_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  validate(cfg);
  check_basis(cfg, basis);
  ExperimentReport rep;
  rep.config = cfg;
  rep.k_gamma = basis.constants().k_gamma;
  const std::vector<double> truth = study_truth(cfg);
  const std::size_t n = cfg.window_length;
  const DesignGrid grid = make_grid(n, basis.weight().domain());
  const std::size_t cap = coefficient_cap(n);
  const double scale = normalization_scale(cfg.normalization, grid.domain);
  const std::vector<double> f = signal_values(truth, basis, grid);
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(n));
  const EnergyWeight w = EnergyWeight::power(cfg.theta);
  const DenoiseOptions dopts{cfg.normalization, cfg.mode};
  const std::size_t nb = cfg.baseline_windows, nw = cfg.stream_windows;
  const std::size_t cols = nb + 2 * nw;

  struct StreamResult {
    bool detected = false;
    bool false_alarm = false;
    double latency = 0.0;
    double radius = 0.0;
    double center = 0.0;
  };
  std::vector<StreamResult> results(cfg.replications);
  parallel_for(cfg.replications, cfg.threads, [&](std::size_t stream) {
    const NoiseModel noise = make_noise(cfg.law, cfg.sigma, derive_seed(cfg.seed, stream), cfg.noise_shape);
    Eigen::MatrixXd xi = noise_matrix(noise, n, cols, 1);
    xi *= cfg.sigma;
    for (std::size_t j = 0; j < cols; ++j) {
      const bool faulty = j >= nb && j < nb + nw && j - nb >= cfg.fault_start;
      xi.col(static_cast<Eigen::Index>(j)) += (faulty ? cfg.fault_amplitude : 1.0) * fv;
    }
    const Eigen::MatrixXd coeffs = project_columns(basis, grid, xi, cap, scale);
    std::vector<EnergyEstimate> energies(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      const Eigen::Index c = static_cast<Eigen::Index>(j);
      SampledSignal s;
      s.grid = grid;
      s.xi = column(xi, c);
      CoefficientSet full{column(coeffs, c), CoefficientKind::empirical, n, scale};
      const DenoiseResult d = denoise_from_coefficients(s, basis, full, dopts);
      energies[j] = weighted_energy_from(s, basis, full, d, w, cfg.correction);
    }
    const std::span<const EnergyEstimate> all(energies);
    const BaselineRegion region = build_baseline(all.subspan(0, nb), n, cfg.theta);
    const auto fault = monitor(all.subspan(nb, nw), region, cfg.alarm_threshold);
    const auto clean = monitor(all.subspan(nb + nw, nw), region, cfg.alarm_threshold);
    StreamResult& r = results[stream];
    r.detected = fault[cfg.fault_start].alarm || fault[cfg.fault_start + 1].alarm;
    std::size_t first = nw;
    for (std::size_t i = cfg.fault_start; i < nw; ++i) {
      if (fault[i].alarm) {
        first = i;
        break;
      }
    }
    r.latency = static_cast<double>(first - cfg.fault_start + 1);
    r.false_alarm = first_alarm(clean) < nw;
    r.radius = region.radius;
    r.center = region.center;
  });

  DetectorSummary d;
  d.streams = cfg.replications;
  std::size_t hits = 0, alarms = 0;
  std::vector<double> lat, rad, cen;
  for (const StreamResult& r : results) {
    hits += r.detected ? 1 : 0;
    alarms += r.false_alarm ? 1 : 0;
    lat.push_back(r.latency);
    rad.push_back(r.radius);
    cen.push_back(r.center);
  }
  d.detected = stats::wilson(hits, results.size());
  d.false_alarms = stats::wilson(alarms, results.size());
  d.median_latency = stats::median(lat);
  d.median_radius = stats::median(rad);
  d.median_center = stats::median(cen);
  rep.detector = d;
  rep.verdicts.push_back({"detector", "fault detected within 2 windows", d.detected.estimate, cfg.detection_rate_min,
                          0.0, d.streams, d.detected.estimate >= cfg.detection_rate_min});
  rep.verdicts.push_back({"detector", "stationary streams with a false alarm", d.false_alarms.estimate,
                          cfg.false_alarm_max, 0.0, d.streams, d.false_alarms.estimate <= cfg.false_alarm_max});
  return rep;
}

ExperimentReport run_study(const ExperimentConfig& cfg, const OrthonormalBasis& basis) {
  switch (cfg.study) {
    case StudyKind::rate: return run_rate_study(cfg, basis);
    case StudyKind::coverage: return run_coverage_study(cfg, basis);
    case StudyKind::constants: return run_constant_study(cfg, basis);
    case StudyKind::energy_rate: return run_energy_rate_study(cfg, basis);
    case StudyKind::detector: return run_detector_study(cfg, basis);
  }
  throw ValidationError("unknown study");
}

ExperimentReport run_study(const ExperimentConfig& cfg) { return run_study(cfg, *study_basis(cfg)); }

RiemannStudy run_riemann_study(std::span<const double> truth, const OrthonormalBasis& basis,
                               std::span<const std::size_t> n_list, std::span<const std::size_t> k_list,
                               Normalization norm) {
  if (n_list.size() < 2 || k_list.empty()) throw ValidationError("riemann study needs >= 2 sizes and >= 1 index");
  const std::size_t k_hi = *std::max_element(k_list.begin(), k_list.end());
  if (k_hi > basis.max_degree() || truth.size() > basis.max_degree()) {
    throw ValidationError("riemann study exceeds the basis size");
  }
  RiemannStudy st;
  st.n_list.assign(n_list.begin(), n_list.end());
  st.k_list.assign(k_list.begin(), k_list.end());
  for (std::size_t n : n_list) {
    const DesignGrid grid = make_grid(n, basis.weight().domain());
    const std::vector<double> f = signal_values(truth, basis, grid);
    const Eigen::Map<const Eigen::MatrixXd> fm(f.data(), static_cast<Eigen::Index>(n), 1);
    const Eigen::MatrixXd c = project_columns(basis, grid, fm, k_hi, normalization_scale(norm, grid.domain));
    std::vector<double> row;
    for (std::size_t k : k_list) {
      const double exact = k <= truth.size() ? truth[k - 1] : 0.0;
      row.push_back(std::abs(c(static_cast<Eigen::Index>(k - 1), 0) - exact));
    }
    st.errors.push_back(std::move(row));
  }
  const double n_last = static_cast<double>(n_list.back());
  for (std::size_t j = 0; j < k_list.size(); ++j) {
    st.fitted_c = std::max(st.fitted_c, st.errors.back()[j] * n_last / static_cast<double>(k_list[j]));
    std::vector<double> ns, es;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      ns.push_back(static_cast<double>(n_list[i]));
      es.push_back(std::max(st.errors[i][j], 1e-300));
    }
    st.slopes.push_back({"k=" + std::to_string(k_list[j]), stats::loglog_fit(ns, es)});
  }
  return st;
}

}  // namespace orthoden
