#include "orthoden/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "orthoden/error.hpp"

namespace orthoden::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? pos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_number(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* b = field.data();
  const char* e = b + field.size();
  if (*b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && std::isfinite(out);
}

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> lines;  // 1-based source line per row
  std::size_t columns = 0;
};

Table read_table(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    std::vector<double> vals(fields.size());
    bool ok = true;
    for (std::size_t j = 0; j < fields.size(); ++j) ok = ok && parse_number(fields[j], vals[j]);
    if (first) {
      first = false;
      if (!ok) continue;  // header
    }
    if (!ok) throw ValidationError(source + ":" + std::to_string(line_no) + ": malformed row '" + trim(line) + "'");
    if (vals.size() > 2) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": expected 1 or 2 columns, found " +
                            std::to_string(vals.size()));
    }
    if (t.columns == 0) t.columns = vals.size();
    if (vals.size() != t.columns) {
      throw ValidationError(source + ":" + std::to_string(line_no) + ": row has " + std::to_string(vals.size()) +
                            " columns, earlier rows have " + std::to_string(t.columns));
    }
    t.rows.push_back(std::move(vals));
    t.lines.push_back(line_no);
  }
  if (in.bad()) throw ValidationError(source + ": read error");
  return t;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  return out;
}

json proportion(const stats::Proportion& p) {
  return json{{"estimate", p.estimate}, {"successes", p.successes}, {"trials", p.trials}, {"wilson_lo", p.lo},
              {"wilson_hi", p.hi}};
}

json fit_json(const stats::LinearFit& f) {
  return json{{"slope", f.slope}, {"slope_se", f.slope_se}, {"intercept", f.intercept}};
}

}  // namespace

SampledSignal parse_signal_csv(std::istream& in, const std::string& source, Interval domain) {
  const Table t = read_table(in, source);
  const std::size_t n = t.rows.size();
  if (n < kMinSampleSize) {
    throw ValidationError(source + ": " + std::to_string(n) + " observations, at least 15 are required");
  }
  SampledSignal s;
  s.grid = make_grid(n, domain);
  s.xi.reserve(n);
  for (const auto& r : t.rows) s.xi.push_back(r.back());
  if (t.columns == 2) {
    for (std::size_t i = 1; i < n; ++i) {
      if (!(t.rows[i][0] > t.rows[i - 1][0])) {
        throw ValidationError(source + ":" + std::to_string(t.lines[i]) + ": x values are not strictly increasing");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(t.rows[i][0] - s.grid.points[i]);
      if (!(d <= kGridTolerance)) {
        std::ostringstream msg;
        msg << std::setprecision(17) << source << ":" << t.lines[i] << ": x=" << t.rows[i][0]
            << " is off the uniform grid (row " << i + 1 << " expects " << s.grid.points[i] << ")";
        throw ValidationError(msg.str());
      }
    }
  }
  return s;
}

SampledSignal parse_signal_csv(const std::filesystem::path& path, Interval domain) {
  std::ifstream in = open_in(path);
  return parse_signal_csv(in, path.string(), domain);
}

std::vector<double> read_value_column(std::istream& in, const std::string& source) {
  const Table t = read_table(in, source);
  std::vector<double> v;
  v.reserve(t.rows.size());
  for (const auto& r : t.rows) v.push_back(r.back());
  return v;
}

std::vector<double> read_value_column(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  return read_value_column(in, path.string());
}

std::vector<SampledSignal> split_windows(const std::vector<double>& values, std::size_t window_length,
                                         Interval domain) {
  if (window_length < kMinSampleSize) throw ValidationError("window length must be >= 15");
  if (values.empty() || values.size() % window_length != 0) {
    throw ValidationError(std::to_string(values.size()) + " values do not split into windows of " +
                          std::to_string(window_length));
  }
  const DesignGrid grid = make_grid(window_length, domain);
  std::vector<SampledSignal> out;
  for (std::size_t i = 0; i < values.size(); i += window_length) {
    SampledSignal s;
    s.grid = grid;
    s.xi.assign(values.begin() + static_cast<std::ptrdiff_t>(i),
                values.begin() + static_cast<std::ptrdiff_t>(i + window_length));
    out.push_back(std::move(s));
  }
  return out;
}

void write_reconstruction_csv(const std::filesystem::path& path, const SampledSignal& s,
                              const std::vector<double>& fit) {
  if (fit.size() != s.size()) throw ValidationError("reconstruction length does not match the signal");
  std::ofstream out = open_out(path);
  out << "x,xi,fit\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << s.grid.points[i] << ',' << s.xi[i] << ',' << fit[i] << '\n';
}

void write_fit_csv(const std::filesystem::path& path, const SampledSignal& s, const std::vector<double>& fit) {
  if (fit.size() != s.size()) throw ValidationError("reconstruction length does not match the signal");
  std::ofstream out = open_out(path);
  out << "x,fit\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << s.grid.points[i] << ',' << fit[i] << '\n';
}

void write_verdicts_csv(const std::filesystem::path& path, const std::vector<DetectionVerdict>& verdicts) {
  std::ofstream out = open_out(path);
  out << "window,energy,inside,consecutive_outside,alarm\n";
  for (const DetectionVerdict& v : verdicts) {
    out << v.window_index << ',' << v.energy << ',' << (v.inside ? 1 : 0) << ',' << v.consecutive_outside << ','
        << (v.alarm ? 1 : 0) << '\n';
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out = open_out(path);
  out << dump(doc);
}

json to_json(const ExperimentConfig& c) {
  return json{{"study", to_string(c.study)},
              {"n_list", c.n_list},
              {"replications", c.replications},
              {"delta", c.delta},
              {"log_power", c.log_power},
              {"signs", c.signs == SignConvention::positive      ? "positive"
                        : c.signs == SignConvention::alternating ? "alternating"
                                                                 : "random"},
              {"c_scale", c.c_scale},
              {"truth_length", c.truth_length},
              {"theta", c.theta},
              {"weight", to_string(c.weight)},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"sigma", c.sigma},
              {"law", to_string(c.law)},
              {"noise_shape", c.noise_shape},
              {"seed", c.seed},
              {"mode", to_string(c.mode)},
              {"correction_mode", to_string(c.correction)},
              {"normalization", to_string(c.normalization)},
              {"slope_tolerance", c.slope_tolerance},
              {"oracle_ratio_max", c.oracle_ratio_max},
              {"bound_coverage_min", c.bound_coverage_min},
              {"fisher_coverage_min", c.fisher_coverage_min},
              {"energy_slope_max", c.energy_slope_max},
              {"sigma_rel_tol", c.sigma_rel_tol},
              {"sigma_fraction_min", c.sigma_fraction_min},
              {"y2_variation_max", c.y2_variation_max},
              {"probe_k", c.probe_k},
              {"window_length", c.window_length},
              {"baseline_windows", c.baseline_windows},
              {"stream_windows", c.stream_windows},
              {"fault_start", c.fault_start},
              {"fault_amplitude", c.fault_amplitude},
              {"alarm_threshold", c.alarm_threshold},
              {"detection_rate_min", c.detection_rate_min},
              {"false_alarm_max", c.false_alarm_max}};
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("experiment config must be a JSON object");
  ExperimentConfig c;
  const json known = to_json(c);
  for (const auto& [key, value] : doc.items()) {
    if (key == "threads" || key == "schema") continue;
    if (!known.contains(key)) throw ValidationError("unknown experiment config key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    auto get_str = [&](const char* key) -> std::optional<std::string> {
      if (!doc.contains(key)) return std::nullopt;
      return doc.at(key).get<std::string>();
    };
    if (auto s = get_str("study")) c.study = parse_study_kind(*s);
    get("n_list", c.n_list);
    get("replications", c.replications);
    get("delta", c.delta);
    get("log_power", c.log_power);
    if (auto s = get_str("signs")) {
      if (*s == "positive") c.signs = SignConvention::positive;
      else if (*s == "alternating") c.signs = SignConvention::alternating;
      else if (*s == "random") c.signs = SignConvention::random;
      else throw ValidationError("unknown sign convention '" + *s + "'");
    }
    get("c_scale", c.c_scale);
    get("truth_length", c.truth_length);
    get("theta", c.theta);
    if (auto s = get_str("weight")) c.weight = parse_weight_kind(*s);
    get("alpha", c.alpha);
    get("beta", c.beta);
    get("sigma", c.sigma);
    if (auto s = get_str("law")) c.law = parse_noise_law(*s);
    get("noise_shape", c.noise_shape);
    get("seed", c.seed);
    if (auto s = get_str("mode")) c.mode = parse_variance_mode(*s);
    if (auto s = get_str("correction_mode")) c.correction = parse_correction_mode(*s);
    if (auto s = get_str("normalization")) {
      if (*s == "paper") c.normalization = Normalization::paper;
      else if (*s == "grid-consistent") c.normalization = Normalization::grid_consistent;
      else throw ValidationError("unknown normalization '" + *s + "'");
    }
    get("slope_tolerance", c.slope_tolerance);
    get("oracle_ratio_max", c.oracle_ratio_max);
    get("bound_coverage_min", c.bound_coverage_min);
    get("fisher_coverage_min", c.fisher_coverage_min);
    get("energy_slope_max", c.energy_slope_max);
    get("sigma_rel_tol", c.sigma_rel_tol);
    get("sigma_fraction_min", c.sigma_fraction_min);
    get("y2_variation_max", c.y2_variation_max);
    get("probe_k", c.probe_k);
    get("window_length", c.window_length);
    get("baseline_windows", c.baseline_windows);
    get("stream_windows", c.stream_windows);
    get("fault_start", c.fault_start);
    get("fault_amplitude", c.fault_amplitude);
    get("alarm_threshold", c.alarm_threshold);
    get("detection_rate_min", c.detection_rate_min);
    get("false_alarm_max", c.false_alarm_max);
    get("threads", c.threads);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("experiment config: ") + e.what());
  }
  validate(c);
  return c;
}

json to_json(const DenoiseResult& r, const ConfidenceReport& c) {
  return json{{"n", r.n},
              {"order", r.m_n},
              {"tau_star", r.tau_star},
              {"sigma2", r.sigma2_n},
              {"k_gamma", r.k_gamma},
              {"coefficients", r.coeffs.values},
              {"confidence",
               {{"bound95", c.bound95},
                {"delta", c.delta_n},
                {"rho_hat", c.rho_hat},
                {"k_const2", c.k_const2},
                {"quantile_factor", c.quantile_factor}}}};
}

json to_json(const EnergyEstimate& e) {
  return json{{"value", e.value},
              {"variance", e.variance},
              {"ci95", {e.ci_lo, e.ci_hi}},
              {"order_used", e.order_used},
              {"kind", e.kind == EnergyKind::ordinary ? "ordinary" : "weighted"},
              {"mode", to_string(e.mode)},
              {"correction_mode", to_string(e.correction)},
              {"truncated_value", e.truncated_value},
              {"negative", e.negative},
              {"n", e.n},
              {"sigma2", e.sigma2_n},
              {"tau_star", e.tau_star},
              {"k_const2", e.k_const2}};
}

json to_json(const FisherInterval& f) {
  return json{{"sqrt_center", f.center_sqrt}, {"sqrt_radius", f.radius_sqrt}, {"sqrt_lo", f.lo_sqrt},
              {"sqrt_hi", f.hi_sqrt},         {"lo", f.lo},                   {"hi", f.hi},
              {"clipped", f.clipped}};
}

json to_json(const BaselineRegion& b) {
  return json{{"center", b.center},       {"radius", b.radius},           {"fisher_radius", b.fisher_radius},
              {"spread_sd", b.spread_sd}, {"built_from", b.built_from},   {"window_length", b.window_length},
              {"theta", b.theta}};
}

json to_json(const ExperimentReport& rep) {
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["config"] = to_json(rep.config);
  doc["k_gamma"] = rep.k_gamma;
  json cells = json::array();
  for (const CellSummary& c : rep.cells) {
    cells.push_back(json{{"n", c.n},
                         {"replications", c.replications},
                         {"loss_mean", c.loss_mean},
                         {"loss_median", c.loss_median},
                         {"loss_q10", c.loss_q10},
                         {"loss_q90", c.loss_q90},
                         {"order_median", c.order_median},
                         {"oracle_risk", c.oracle_a_star},
                         {"oracle_order", c.oracle_n0},
                         {"median_over_oracle", c.median_over_oracle},
                         {"tau_over_oracle_median", c.tau_over_oracle_median},
                         {"tau_over_oracle_q90", c.tau_over_oracle_q90},
                         {"loss_over_tau_median", c.loss_over_tau_median},
                         {"loss_over_tau_q90", c.loss_over_tau_q90},
                         {"bound_coverage", proportion(c.bound_coverage)},
                         {"fisher_coverage", proportion(c.fisher_coverage)},
                         {"sigma_within", proportion(c.sigma_within)},
                         {"sigma2_median", c.sigma2_median},
                         {"energy_truth", c.energy_truth},
                         {"energy_mean", c.energy_mean},
                         {"energy_mc_se", c.energy_mc_se},
                         {"energy_variance_ratio", c.energy_variance_ratio},
                         {"energy_design_ratio", c.energy_design_ratio},
                         {"rho_at_order_median", c.rho_at_order_median},
                         {"energy_normality",
                          {{"statistic", c.energy_normality.statistic},
                           {"critical_value", c.energy_normality.critical_value},
                           {"pass", c.energy_normality.pass}}},
                         {"weighted_truth", c.weighted_truth},
                         {"weighted_mse", c.weighted_mse},
                         {"order_w_median", c.order_w_median},
                         {"eta_variance", c.eta_variance},
                         {"eta_design", c.eta_design}});
  }
  doc["cells"] = cells;
  json fits = json::array();
  for (const SlopeFit& f : rep.fits) fits.push_back(json{{"name", f.name}, {"fit", fit_json(f.fit)}});
  doc["fits"] = fits;
  if (rep.detector) {
    const DetectorSummary& d = *rep.detector;
    doc["detector"] = json{{"streams", d.streams},
                           {"detected", proportion(d.detected)},
                           {"false_alarms", proportion(d.false_alarms)},
                           {"median_latency", d.median_latency},
                           {"median_radius", d.median_radius},
                           {"median_center", d.median_center}};
  }
  json verdicts = json::array();
  for (const Verdict& v : rep.verdicts) {
    verdicts.push_back(json{{"criterion", v.criterion},
                            {"quantity", v.quantity},
                            {"measured", v.measured},
                            {"target", v.target},
                            {"tolerance", v.tolerance},
                            {"sample_size", v.sample_size},
                            {"pass", v.pass}});
  }
  doc["verdicts"] = verdicts;
  doc["all_pass"] = rep.all_pass();
  return doc;
}

void write_cells_csv(const std::filesystem::path& path, const ExperimentReport& rep) {
  std::ofstream out = open_out(path);
  out << "n,replications,loss_median,loss_q10,loss_q90,order_median,oracle_risk,median_over_oracle,"
         "bound_coverage,fisher_coverage,sigma_within,energy_mean,energy_truth,weighted_mse,order_w_median\n";
  for (const CellSummary& c : rep.cells) {
    out << c.n << ',' << c.replications << ',' << c.loss_median << ',' << c.loss_q10 << ',' << c.loss_q90 << ','
        << c.order_median << ',' << c.oracle_a_star << ',' << c.median_over_oracle << ','
        << c.bound_coverage.estimate << ',' << c.fisher_coverage.estimate << ',' << c.sigma_within.estimate << ','
        << c.energy_mean << ',' << c.energy_truth << ',' << c.weighted_mse << ',' << c.order_w_median << '\n';
  }
}

void write_records_csv(const std::filesystem::path& path, const ExperimentReport& rep) {
  std::ofstream out = open_out(path);
  out << "n,replication,order,loss,tau_star,bound95,sigma2,energy,energy_variance,fisher_covers,order_w,"
         "weighted_energy\n";
  for (const auto& cell : rep.records) {
    for (const ReplicationRecord& r : cell) {
      out << r.n << ',' << r.replication << ',' << r.m_n << ',' << r.loss << ',' << r.tau_star << ',' << r.bound95
          << ',' << r.sigma2_n << ',' << r.energy << ',' << r.energy_variance << ',' << (r.fisher_covers ? 1 : 0)
          << ',' << r.order_w << ',' << r.weighted_energy << '\n';
    }
  }
}

}  // namespace orthoden::io
