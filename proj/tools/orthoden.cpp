// orthoden: adaptive orthogonal-series denoising, energy estimation and
// energy-based distortion monitoring from the command line.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "orthoden/detector.hpp"
#include "orthoden/error.hpp"
#include "orthoden/harness.hpp"
#include "orthoden/io.hpp"
#include "orthoden/uncertainty.hpp"

namespace fs = std::filesystem;
using namespace orthoden;
using io::json;

namespace {

struct Common {
  std::string weight = "jacobi";
  double alpha = -0.25;
  double beta = -0.25;
  std::string mode = "exact-design";
  std::string correction = "corrected";
  double theta = 0.0;
  std::uint64_t seed = 0;
  std::string output = ".";
  bool paper_normalization = false;
  std::size_t window_length = 0;
  std::size_t alarm_threshold = 2;
};

void add_weight_flags(CLI::App* app, Common& c) {
  app->add_option("--weight", c.weight, "signal weight family")
      ->check(CLI::IsMember({"jacobi", "beta01"}))
      ->capture_default_str();
  app->add_option("--alpha", c.alpha, "first weight exponent")->capture_default_str();
  app->add_option("--beta", c.beta, "second weight exponent")->capture_default_str();
}

void add_estimation_flags(CLI::App* app, Common& c) {
  add_weight_flags(app, c);
  app->add_option("--mode", c.mode, "noise-variance constant")
      ->check(CLI::IsMember({"paper", "exact-design"}))
      ->capture_default_str();
  app->add_option("--correction-mode", c.correction, "energy bias handling")
      ->check(CLI::IsMember({"paper", "corrected"}))
      ->capture_default_str();
  app->add_flag("--paper-normalization", c.paper_normalization, "use bare n^-1 grid sums");
  app->add_option("--seed", c.seed, "recorded seed")->capture_default_str();
  app->add_option("--output", c.output, "output directory")->capture_default_str();
}

WeightFunction weight_of(const Common& c) { return make_weight(parse_weight_kind(c.weight), c.alpha, c.beta); }

DenoiseOptions denoise_options(const Common& c) {
  return {c.paper_normalization ? Normalization::paper : Normalization::grid_consistent,
          parse_variance_mode(c.mode)};
}

json resolved(const Common& c, const std::string& command) {
  return json{{"command", command},
              {"weight", c.weight},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"mode", c.mode},
              {"correction_mode", c.correction},
              {"normalization", c.paper_normalization ? "paper" : "grid-consistent"},
              {"theta", c.theta},
              {"seed", c.seed}};
}

fs::path prepare_output(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir + "'");
  return p;
}

int run_denoise(const Common& c, const std::string& input) {
  const WeightFunction w = weight_of(c);
  const SampledSignal s = io::parse_signal_csv(input, w.domain());
  const OrthonormalBasis basis = build_basis(w, coefficient_cap(s.size()));
  const DenoiseResult r = denoise(s, basis, denoise_options(c));
  const ConfidenceReport conf = confidence_report(r);
  std::vector<double> fit(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) fit[i] = basis.series(s.grid.points[i], r.coeffs.values);

  const fs::path out = prepare_output(c.output);
  json doc;
  doc["schema"] = io::kSchemaVersion;
  doc["config"] = resolved(c, "denoise");
  doc["config"]["input"] = input;
  doc["config"]["weight_description"] = w.describe();
  doc["result"] = io::to_json(r, conf);
  io::write_json(out / "denoise.json", doc);
  io::write_reconstruction_csv(out / "reconstruction.csv", s, fit);
  io::write_fit_csv(out / "fit.csv", s, fit);
  std::cout << "order " << r.m_n << ", sigma^2 " << r.sigma2_n << ", bound95 " << conf.bound95 << "\n";
  return 0;
}

int run_energy(const Common& c, const std::string& input) {
  const WeightFunction w = weight_of(c);
  const SampledSignal s = io::parse_signal_csv(input, w.domain());
  const OrthonormalBasis basis = build_basis(w, coefficient_cap(s.size()));
  EnergyOptions opts{denoise_options(c), parse_correction_mode(c.correction)};
  const EnergyEstimate e = weighted_energy(s, basis, EnergyWeight::power(c.theta), opts);

  const fs::path out = prepare_output(c.output);
  json doc;
  doc["schema"] = io::kSchemaVersion;
  doc["config"] = resolved(c, "energy");
  doc["config"]["input"] = input;
  doc["result"] = io::to_json(e);
  doc["fisher"] = io::to_json(fisher_interval(e));
  io::write_json(out / "energy.json", doc);
  std::cout << "energy " << e.value << " (order " << e.order_used << ", variance " << e.variance << ")\n";
  return 0;
}

std::vector<SampledSignal> load_windows(const fs::path& file, std::size_t len, Interval domain) {
  return io::split_windows(io::read_value_column(file), len, domain);
}

int run_monitor(const Common& c, const std::string& baseline_dir, const std::string& stream_file) {
  if (c.window_length == 0) throw ValidationError("--window-length is required");
  const WeightFunction w = weight_of(c);
  std::vector<fs::path> files;
  if (!fs::is_directory(baseline_dir)) throw ValidationError("baseline '" + baseline_dir + "' is not a directory");
  for (const auto& entry : fs::directory_iterator(baseline_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SampledSignal> baseline;
  for (const fs::path& f : files) {
    for (SampledSignal& s : load_windows(f, c.window_length, w.domain())) baseline.push_back(std::move(s));
  }
  const std::vector<SampledSignal> stream = load_windows(stream_file, c.window_length, w.domain());

  const OrthonormalBasis basis = build_basis(w, coefficient_cap(c.window_length));
  DetectorOptions opts;
  opts.theta = c.theta;
  opts.alarm_threshold = c.alarm_threshold;
  opts.energy = {denoise_options(c), parse_correction_mode(c.correction)};
  const BaselineRegion region = build_baseline(baseline, basis, opts);
  const std::vector<DetectionVerdict> verdicts = monitor(stream, region, basis, opts);

  const fs::path out = prepare_output(c.output);
  io::write_verdicts_csv(out / "verdicts.csv", verdicts);
  json doc;
  doc["schema"] = io::kSchemaVersion;
  doc["config"] = resolved(c, "monitor");
  doc["config"]["baseline"] = baseline_dir;
  doc["config"]["stream"] = stream_file;
  doc["config"]["window_length"] = c.window_length;
  doc["config"]["alarm_threshold"] = c.alarm_threshold;
  doc["baseline"] = io::to_json(region);
  const std::size_t first = first_alarm(verdicts);
  doc["windows"] = verdicts.size();
  doc["first_alarm"] = first < verdicts.size() ? json(first) : json(nullptr);
  io::write_json(out / "monitor.json", doc);
  if (first < verdicts.size()) {
    std::cout << "alarm at window " << first << "\n";
  } else {
    std::cout << "no alarm in " << verdicts.size() << " windows\n";
  }
  return 0;
}

int run_simulate(const std::string& config_file, std::optional<std::uint64_t> seed, std::size_t threads,
                 const std::string& output) {
  std::ifstream in(config_file);
  if (!in) throw ValidationError("cannot open '" + config_file + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(config_file + ": " + e.what());
  }
  ExperimentConfig cfg = io::config_from_json(doc);
  if (seed) cfg.seed = *seed;
  cfg.threads = threads;
  const ExperimentReport rep = run_study(cfg);
  const fs::path out = prepare_output(output);
  io::write_json(out / "report.json", io::to_json(rep));
  if (!rep.cells.empty()) {
    io::write_cells_csv(out / "cells.csv", rep);
    io::write_records_csv(out / "records.csv", rep);
  }
  for (const Verdict& v : rep.verdicts) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.criterion << ": " << v.quantity << " = " << v.measured
              << " (target " << v.target << ")\n";
  }
  return 0;
}

int run_basis(const Common& c, std::size_t max_degree) {
  if (max_degree < 1) throw ValidationError("--max-degree must be >= 1");
  const WeightFunction w = weight_of(c);
  BasisOptions bo;
  bo.validate_up_to = std::min<std::size_t>(max_degree, 30);
  const OrthonormalBasis basis = build_basis(w, max_degree, bo);
  const QuadratureRule rule = basis.gamma_rule(std::max<std::size_t>(512, 2 * max_degree + 64));

  std::vector<double> gram(max_degree * max_degree, 0.0);
  std::vector<double> phi(max_degree);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis.eval_into(rule.nodes[q], phi);
    for (std::size_t j = 0; j < max_degree; ++j) {
      for (std::size_t k = j; k < max_degree; ++k) gram[j * max_degree + k] += rule.weights[q] * phi[j] * phi[k];
    }
  }
  const fs::path out = prepare_output(c.output);
  std::ofstream csv(out / "basis.csv");
  if (!csv) throw ValidationError("cannot write basis.csv");
  csv << std::setprecision(17) << "j,k,inner_product,error\n";
  double worst = 0.0;
  for (std::size_t j = 0; j < max_degree; ++j) {
    for (std::size_t k = j; k < max_degree; ++k) {
      const double g = gram[j * max_degree + k];
      const double err = std::abs(g - (j == k ? 1.0 : 0.0));
      worst = std::max(worst, err);
      csv << j + 1 << ',' << k + 1 << ',' << g << ',' << err << '\n';
    }
  }
  const WeightConstants& k = basis.constants();
  json doc;
  doc["schema"] = io::kSchemaVersion;
  doc["config"] = resolved(c, "basis");
  doc["config"]["max_degree"] = max_degree;
  doc["constants"] = json{{"k_gamma", k.k_gamma}, {"mass", k.mass}, {"c0", k.c0}, {"c1", k.c1}, {"lambda", k.lambda}};
  if (const auto cj = w.canonical(); cj && w.kind() == WeightKind::jacobi) {
    const JacobiClosedForms cf = jacobi_closed_forms(c.alpha, c.beta);
    doc["closed_forms"] = json{{"mass", cf.mass},
                               {"c1", cf.c1},
                               {"lambda_inv2", cf.lambda_inv2},
                               {"lambda_inv2_text", cf.lambda_inv2_text},
                               {"k_gamma", cf.k_gamma},
                               {"k_gamma_text", cf.k_gamma_text}};
  }
  json rows = json::array();
  for (const RecurrenceRow& r : basis.recurrence()) rows.push_back({r.a, r.b, r.c});
  doc["recurrence"] = rows;
  doc["max_orthonormality_error"] = worst;
  io::write_json(out / "basis.json", doc);
  std::cout << "max orthonormality error " << worst << " up to degree " << max_degree << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive orthogonal-series denoising and energy monitoring"};
  app.require_subcommand(1);
  Common c;
  std::string input;

  CLI::App* den = app.add_subcommand("denoise", "adaptive projection estimate of a sampled signal");
  den->add_option("input", input, "signal CSV")->required()->check(CLI::ExistingFile);
  add_estimation_flags(den, c);

  CLI::App* en = app.add_subcommand("energy", "energy of a sampled signal");
  en->add_option("input", input, "signal CSV")->required()->check(CLI::ExistingFile);
  add_estimation_flags(en, c);
  en->add_option("--theta", c.theta, "energy order")->capture_default_str();

  std::string baseline_dir, stream_file;
  CLI::App* mon = app.add_subcommand("monitor", "sliding-window energy monitoring");
  mon->add_option("--baseline", baseline_dir, "directory of baseline CSV files")->required();
  mon->add_option("--stream", stream_file, "stream CSV")->required()->check(CLI::ExistingFile);
  add_estimation_flags(mon, c);
  mon->add_option("--theta", c.theta, "energy order")->capture_default_str();
  mon->add_option("--window-length", c.window_length, "samples per window")->required();
  mon->add_option("--alarm-threshold", c.alarm_threshold, "consecutive windows outside before an alarm")
      ->capture_default_str();

  std::string config_file, sim_output = ".";
  std::optional<std::uint64_t> sim_seed;
  std::size_t threads = 0;
  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo experiment from a JSON config");
  sim->add_option("config", config_file, "experiment config JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
  sim->add_option("--output", sim_output, "output directory")->capture_default_str();

  std::size_t max_degree = 30;
  CLI::App* bas = app.add_subcommand("basis", "orthonormality report of the polynomial system");
  add_weight_flags(bas, c);
  bas->add_option("--max-degree", max_degree, "number of basis functions")->capture_default_str();
  bas->add_option("--output", c.output, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*den) return run_denoise(c, input);
    if (*en) return run_energy(c, input);
    if (*mon) return run_monitor(c, baseline_dir, stream_file);
    if (*sim) return run_simulate(config_file, sim_seed, threads, sim_output);
    if (*bas) return run_basis(c, max_degree);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
