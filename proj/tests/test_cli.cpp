#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>
#include <sys/wait.h>

#include "orthoden/io.hpp"

namespace fs = std::filesystem;
using namespace orthoden;
using io::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("orthoden_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
};

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + ORTHODEN_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_values(const fs::path& p, const std::vector<double>& v, bool with_x) {
  std::ofstream out(p);
  out.precision(17);
  const DesignGrid g = make_grid(v.size());
  out << (with_x ? "x,xi\n" : "xi\n");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (with_x) out << g.points[i] << ',';
    out << v[i] << '\n';
  }
}

std::vector<double> noisy_signal(std::size_t n, double sigma, std::uint64_t stream, double amplitude = 1.0) {
  static const OrthonormalBasis b = build_basis(WeightFunction::jacobi(-0.25, -0.25), 400);
  SpectralDecayModel m;
  m.delta = 1.5;
  m.c_scale = amplitude;
  return sample_signal(synth_coefficients(m, 300), b, make_grid(n), make_noise(NoiseLaw::gaussian, sigma, 3), stream)
      .xi;
}

}  // namespace

TEST_CASE("denoise writes JSON and reconstruction") {
  Sandbox box;
  write_values(box.dir / "in.csv", noisy_signal(2000, 0.2, 1), true);
  const fs::path out = box.dir / "out";
  CHECK(run("denoise \"" + (box.dir / "in.csv").string() + "\" --alpha 0 --beta 0 --output \"" + out.string() + "\"",
            box.dir / "log") == 0);
  const json j = load(out / "denoise.json");
  CHECK(j.at("schema") == "1");
  CHECK(j.at("config").at("alpha") == 0.0);
  CHECK(j.at("config").at("mode") == "exact-design");
  CHECK(j.at("result").at("order").get<std::size_t>() >= 1);
  CHECK(j.at("result").at("confidence").at("bound95").get<double>() >= j.at("result").at("tau_star").get<double>());
  const std::string csv = slurp(out / "reconstruction.csv");
  CHECK(csv.rfind("x,xi,fit\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2001);
}

TEST_CASE("reconstruction re-ingests to itself") {
  Sandbox box;
  write_values(box.dir / "in.csv", noisy_signal(2000, 0.2, 2), false);
  const fs::path a = box.dir / "a", b = box.dir / "b";
  REQUIRE(run("denoise \"" + (box.dir / "in.csv").string() + "\" --output \"" + a.string() + "\"", box.dir / "log") ==
          0);
  REQUIRE(run("denoise \"" + (a / "fit.csv").string() + "\" --output \"" + b.string() + "\"", box.dir / "log") == 0);
  const auto ca = load(a / "denoise.json").at("result").at("coefficients").get<std::vector<double>>();
  const auto cb = load(b / "denoise.json").at("result").at("coefficients").get<std::vector<double>>();
  CHECK(ca.size() == cb.size());
  double dist = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < std::max(ca.size(), cb.size()); ++k) {
    const double x = k < ca.size() ? ca[k] : 0.0, y = k < cb.size() ? cb[k] : 0.0;
    dist += (x - y) * (x - y);
    norm += x * x;
  }
  // grid sums reproject a degree M-1 polynomial with error of order M / n
  const double tol = static_cast<double>(ca.size()) * std::sqrt(norm) / 2000.0;
  MESSAGE("round-trip coefficient distance " << std::sqrt(dist) << ", tolerance " << tol);
  CHECK(std::sqrt(dist) <= tol);
  CHECK(load(b / "denoise.json").at("result").at("sigma2").get<double>() < 1e-5);
}

TEST_CASE("energy subcommand") {
  Sandbox box;
  write_values(box.dir / "in.csv", noisy_signal(2000, 0.2, 3), false);
  const fs::path out = box.dir / "out";
  CHECK(run("energy \"" + (box.dir / "in.csv").string() + "\" --theta 1 --correction-mode corrected --output \"" +
                out.string() + "\"",
            box.dir / "log") == 0);
  const json j = load(out / "energy.json");
  const json& r = j.at("result");
  CHECK(r.at("kind") == "weighted");
  CHECK(r.at("correction_mode") == "corrected");
  CHECK(r.at("ci95")[0].get<double>() <= r.at("value").get<double>());
  CHECK(r.at("variance").get<double>() >= 0.0);
  CHECK(j.at("config").at("theta") == 1.0);
  CHECK(j.contains("fisher"));
}

TEST_CASE("basis subcommand") {
  Sandbox box;
  const fs::path out = box.dir / "out";
  CHECK(run("basis --alpha -0.25 --beta 0 --max-degree 30 --output \"" + out.string() + "\"", box.dir / "log") == 0);
  const json j = load(out / "basis.json");
  CHECK(j.at("max_orthonormality_error").get<double>() < 1e-8);
  CHECK(j.at("constants").at("c1").get<double>() == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
  CHECK(j.at("recurrence").size() == 29);
  const std::string csv = slurp(out / "basis.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 30 * 31 / 2);
}

TEST_CASE("monitor subcommand flags a doubled amplitude") {
  Sandbox box;
  fs::create_directories(box.dir / "base");
  for (std::uint64_t w = 0; w < 4; ++w) {
    write_values(box.dir / "base" / ("w" + std::to_string(w) + ".csv"), noisy_signal(500, 0.1, 10 + w), false);
  }
  std::vector<double> stream;
  for (std::uint64_t w = 0; w < 6; ++w) {
    const auto v = noisy_signal(500, 0.1, 20 + w, w < 3 ? 1.0 : 2.0);
    stream.insert(stream.end(), v.begin(), v.end());
  }
  write_values(box.dir / "stream.csv", stream, false);
  const fs::path out = box.dir / "out";
  CHECK(run("monitor --baseline \"" + (box.dir / "base").string() + "\" --stream \"" +
                (box.dir / "stream.csv").string() + "\" --window-length 500 --alarm-threshold 2 --output \"" +
                out.string() + "\"",
            box.dir / "log") == 0);
  const json j = load(out / "monitor.json");
  CHECK(j.at("first_alarm") == 4);
  CHECK(j.at("baseline").at("built_from") == 4);
  const std::string csv = slurp(out / "verdicts.csv");
  CHECK(csv.rfind("window,energy,inside", 0) == 0);
  CHECK(run("monitor --baseline \"" + (box.dir / "base").string() + "\" --stream \"" +
                (box.dir / "stream.csv").string() + "\" --window-length 700 --output \"" + out.string() + "\"",
            box.dir / "log") == 1);
}

TEST_CASE("simulate is byte-identical across runs and thread counts") {
  Sandbox box;
  {
    std::ofstream cfg(box.dir / "cfg.json");
    cfg << R"({"study": "coverage", "n_list": [300, 600], "replications": 40, "truth_length": 300})";
  }
  const std::string base = "simulate \"" + (box.dir / "cfg.json").string() + "\" --seed 7 ";
  REQUIRE(run(base + "--threads 1 --output \"" + (box.dir / "a").string() + "\"", box.dir / "log") == 0);
  REQUIRE(run(base + "--threads 4 --output \"" + (box.dir / "b").string() + "\"", box.dir / "log") == 0);
  REQUIRE(run(base + "--threads 4 --output \"" + (box.dir / "c").string() + "\"", box.dir / "log") == 0);
  const std::string a = slurp(box.dir / "a" / "report.json");
  CHECK(a == slurp(box.dir / "b" / "report.json"));
  CHECK(a == slurp(box.dir / "c" / "report.json"));
  CHECK(slurp(box.dir / "a" / "records.csv") == slurp(box.dir / "b" / "records.csv"));
  CHECK(load(box.dir / "a" / "report.json").at("config").at("seed") == 7);
}

TEST_CASE("exit codes") {
  Sandbox box;
  const fs::path log = box.dir / "log";
  CHECK(run("", log) == 1);
  CHECK(run("denoise \"" + (box.dir / "missing.csv").string() + "\"", log) == 1);
  {
    std::ofstream bad(box.dir / "offgrid.csv");
    bad.precision(17);
    const DesignGrid g = make_grid(20);
    bad << "x,xi\n";
    for (std::size_t i = 0; i < 20; ++i) bad << g.points[i] + (i == 4 ? 0.01 : 0.0) << ",1\n";
  }
  CHECK(run("denoise \"" + (box.dir / "offgrid.csv").string() + "\" --output \"" + box.dir.string() + "\"", log) == 1);
  CHECK(slurp(log).find("row 5") != std::string::npos);
  {
    std::ofstream cfg(box.dir / "bad.json");
    cfg << R"({"sigmaa": 1})";
  }
  CHECK(run("simulate \"" + (box.dir / "bad.json").string() + "\"", log) == 1);
  write_values(box.dir / "huge.csv", std::vector<double>(30, 1e308), false);
  CHECK(run("energy \"" + (box.dir / "huge.csv").string() + "\" --output \"" + box.dir.string() + "\"", log) == 2);
  CHECK(run("denoise \"" + (box.dir / "huge.csv").string() + "\" --output \"" + box.dir.string() + "\"", log) == 2);
}
