// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "orthoden/harness.hpp"
#include "orthoden/io.hpp"

using namespace orthoden;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0: no runtime limit
  std::function<Outcome()> body;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

ExperimentConfig study(StudyKind kind, double delta, std::vector<std::size_t> ns, std::size_t reps) {
  ExperimentConfig c;
  c.study = kind;
  c.delta = delta;
  c.n_list = std::move(ns);
  c.replications = reps;
  return c;
}

// Every verdict of the report must pass; the detail lists the failing ones.
Outcome verdicts(const std::vector<ExperimentReport>& reps) {
  Outcome o{true, ""};
  for (const ExperimentReport& r : reps) {
    for (const Verdict& v : r.verdicts) {
      if (v.criterion == "constants") continue;
      if (!o.detail.empty()) o.detail += "; ";
      o.detail += v.quantity + " " + fmt(v.measured) + (v.pass ? "" : " [miss, target " + fmt(v.target) + "]");
      o.pass = o.pass && v.pass;
    }
  }
  return o;
}

Outcome basis_orthonormality() {
  std::vector<WeightFunction> ws;
  for (double a : {-0.4, -0.25, 0.0, 0.5}) {
    for (double b : {-0.4, -0.25, 0.0, 0.5}) ws.push_back(WeightFunction::jacobi(a, b));
  }
  ws.push_back(WeightFunction::beta01(1.0, 1.0));
  double worst = 0.0;
  std::string where;
  for (const WeightFunction& w : ws) {
    const OrthonormalBasis b = build_basis(w, 31);
    const QuadratureRule rule = b.gamma_rule(256);
    std::vector<double> phi(31), gram(31 * 31, 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      b.eval_into(rule.nodes[q], phi);
      for (std::size_t j = 0; j < 31; ++j) {
        for (std::size_t k = j; k < 31; ++k) gram[j * 31 + k] += rule.weights[q] * phi[j] * phi[k];
      }
    }
    for (std::size_t j = 0; j < 31; ++j) {
      for (std::size_t k = j; k < 31; ++k) {
        const double e = std::abs(gram[j * 31 + k] - (j == k ? 1.0 : 0.0));
        if (e > worst) {
          worst = e;
          where = w.describe();
        }
      }
    }
  }
  return {worst < 1e-8, "17 weights, degrees 0..30, worst error " + fmt(worst) + " (" + where + ") < 1e-8"};
}

Outcome closed_forms() {
  double worst_mass = 0.0, worst_c1 = 0.0, k_ratio = 0.0, lambda_ratio = 0.0;
  for (double a : {-0.4, -0.25, 0.0, 0.5}) {
    for (double b : {-0.4, -0.25, 0.0, 0.5}) {
      const WeightConstants c = weight_constants(WeightFunction::jacobi(a, b));
      const double mass = std::pow(2.0, a + b + 1.0) * boost::math::beta(a + 1.0, b + 1.0);
      const double c1 = (b - a) / (a + b + 2.0);
      worst_mass = std::max(worst_mass, std::abs(c.mass - mass) / mass);
      worst_c1 = std::max(worst_c1, std::abs(c.c1 - c1));
      const JacobiClosedForms cf = jacobi_closed_forms(a, b);
      k_ratio = cf.k_gamma_text / c.k_gamma;
      if (a == 0.0 && b == 0.0) lambda_ratio = cf.lambda_inv2_text / (1.0 / (c.lambda * c.lambda));
    }
  }
  const bool pass = worst_mass < 1e-9 && worst_c1 < 1e-9;
  return {pass, "mass rel err " + fmt(worst_mass) + ", C1 err " + fmt(worst_c1) +
                    " (< 1e-9); displayed K / quadrature K = " + fmt(k_ratio) +
                    ", displayed lambda^-2 / quadrature at (0,0) = " + fmt(lambda_ratio)};
}

Outcome riemann_bound() {
  const OrthonormalBasis b = build_basis(WeightFunction::jacobi(0.0, 0.0), 40);
  std::vector<double> truth(12);
  for (std::size_t k = 0; k < truth.size(); ++k) truth[k] = (k % 2 ? -1.0 : 1.0) * std::pow(k + 1.0, -1.5);
  const std::vector<std::size_t> ns{1250, 2500, 5000, 10000};
  const std::vector<std::size_t> ks{1, 2, 4, 8, 12, 16};
  const RiemannStudy s = run_riemann_study(truth, b, ns, ks);
  bool pass = std::isfinite(s.fitted_c) && s.fitted_c > 0.0;
  // First-order slope at low k, where the c(k)/n term dominates for n <= 10^4;
  // higher k are reported and only held to the C k / n envelope.
  std::string slopes, fast;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const SlopeFit& f = s.slopes[j];
    if (ks[j] <= 4) {
      pass = pass && std::abs(f.fit.slope + 1.0) <= 0.15;
      slopes += (slopes.empty() ? "" : ", ") + f.name + " " + fmt(f.fit.slope);
    } else {
      fast += (fast.empty() ? "" : ", ") + f.name + " " + fmt(f.fit.slope);
    }
    pass = pass && s.errors.back()[j] <= s.fitted_c * static_cast<double>(ks[j]) / 1e4 * (1.0 + 1e-12);
  }
  return {pass, "Legendre weight, C = " + fmt(s.fitted_c) + ", slopes vs n: " + slopes +
                    " (target -1 +- 0.15); higher k: " + fast};
}

Outcome adaptive_rate() {
  std::vector<ExperimentReport> reps;
  for (double d : {0.75, 1.0, 1.5}) reps.push_back(run_study(study(StudyKind::rate, d, {1000, 4000, 16000}, 100)));
  Outcome o = verdicts(reps);
  o.detail = "delta 0.75/1/1.5: " + o.detail;
  return o;
}

std::vector<Verdict> pick(const ExperimentReport& r, const std::string& criterion) {
  std::vector<Verdict> v;
  for (const Verdict& x : r.verdicts) {
    if (x.criterion == criterion) v.push_back(x);
  }
  return v;
}

Outcome from(const std::vector<Verdict>& vs) {
  ExperimentReport r;
  r.verdicts = vs;
  return verdicts({r});
}

Outcome variance_estimator() {
  const ExperimentReport r = run_study(study(StudyKind::coverage, 1.0, {5000}, 200));
  return from(pick(r, "variance-estimator"));
}

Outcome confidence_coverage() {
  const ExperimentReport r = run_study(study(StudyKind::coverage, 1.0, {4000}, 500));
  Outcome o = from(pick(r, "confidence-coverage"));
  const CellSummary& c = r.cells.front();
  o.detail += ", mean loss / mean tau* " + fmt(c.loss_mean / std::max(1e-300, [&] {
                double t = 0.0;
                for (const ReplicationRecord& x : r.records.front()) t += x.tau_star;
                return t / static_cast<double>(r.records.front().size());
              }()));
  return o;
}

Outcome energy_clt() {
  const ExperimentReport r = run_study(study(StudyKind::coverage, 1.5, {4000}, 500));
  return from(pick(r, "energy-clt"));
}

Outcome weighted_rate() {
  ExperimentConfig c = study(StudyKind::energy_rate, 1.5, {1000, 4000, 16000}, 100);
  c.theta = 1.0;
  return verdicts({run_study(c)});
}

Outcome detector() {
  ExperimentConfig c = study(StudyKind::detector, 1.5, {2000}, 200);
  c.sigma = 0.1;
  return verdicts({run_study(c)});
}

Outcome determinism() {
  std::vector<ExperimentConfig> cfgs;
  for (StudyKind k : {StudyKind::rate, StudyKind::coverage, StudyKind::constants, StudyKind::energy_rate}) {
    ExperimentConfig c = study(k, 1.0, {400, 800}, 50);
    c.truth_length = 500;
    c.theta = k == StudyKind::energy_rate ? 1.0 : 0.0;
    cfgs.push_back(c);
  }
  ExperimentConfig d = study(StudyKind::detector, 1.5, {500}, 20);
  d.sigma = 0.1;
  d.window_length = 500;
  d.truth_length = 500;
  cfgs.push_back(d);
  std::size_t identical = 0;
  for (ExperimentConfig c : cfgs) {
    c.threads = 1;
    const std::string one = io::dump(io::to_json(run_study(c)));
    const std::string again = io::dump(io::to_json(run_study(c)));
    c.threads = 4;
    const std::string four = io::dump(io::to_json(run_study(c)));
    identical += one == again && one == four;
  }
  return {identical == cfgs.size(),
          std::to_string(identical) + "/" + std::to_string(cfgs.size()) +
              " study kinds byte-identical across repeat runs and 1 vs 4 threads"};
}

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "basis-orthonormality", 10, basis_orthonormality},
      {2, "closed-forms", 5, closed_forms},
      {3, "riemann-bound", 30, riemann_bound},
      {4, "adaptive-rate", 300, adaptive_rate},
      {5, "variance-estimator", 60, variance_estimator},
      {6, "confidence-coverage", 180, confidence_coverage},
      {7, "energy-clt", 180, energy_clt},
      {8, "weighted-energy-rate", 300, weighted_rate},
      {9, "detector", 120, detector},
      {10, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::string limit = c.budget_s > 0 ? " < " + fmt(c.budget_s) + " s" : "";
    std::printf("%s %2d %-22s %s [%.1f s%s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                secs, limit.c_str(), in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
