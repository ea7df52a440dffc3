#include "doctest.h"

#include <cmath>
#include <sstream>

#include "orthoden/error.hpp"
#include "orthoden/io.hpp"

using namespace orthoden;

namespace {

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    io::parse_signal_csv(in, "sig.csv");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

std::string grid_file(std::size_t n, std::size_t bad_row = 0, double shift = 0.0) {
  const DesignGrid g = make_grid(n);
  std::ostringstream out;
  out.precision(17);
  out << "x,xi\n";
  for (std::size_t i = 0; i < n; ++i) out << g.points[i] + (i + 1 == bad_row ? shift : 0.0) << ',' << i * 0.5 << '\n';
  return out.str();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("single column file synthesizes the grid") {
    std::ostringstream text;
    for (int i = 0; i < 15; ++i) text << i << '\n';
    std::istringstream in(text.str());
    const SampledSignal s = io::parse_signal_csv(in, "sig.csv");
    CHECK(s.size() == 15);
    CHECK(s.grid.points.front() == -1.0);
    CHECK(s.xi[14] == 14.0);
  }

  TEST_CASE("two column file on the grid is accepted") {
    std::istringstream in(grid_file(40));
    const SampledSignal s = io::parse_signal_csv(in, "sig.csv");
    CHECK(s.size() == 40);
    CHECK(s.xi[3] == 1.5);
  }

  TEST_CASE("off-grid x names the row") {
    const std::string msg = error_of(grid_file(40, 7, 0.01));
    CHECK(msg.find("row 7") != std::string::npos);
    CHECK(msg.find("sig.csv:8") != std::string::npos);
  }

  TEST_CASE("malformed and short input") {
    std::string text = "xi\n";
    for (int i = 0; i < 20; ++i) text += i == 9 ? "abc\n" : "1.0\n";
    CHECK(error_of(text).find("sig.csv:11") != std::string::npos);
    CHECK(error_of("1\n2\n3\n").find("at least 15") != std::string::npos);
    std::string three;
    for (int i = 0; i < 20; ++i) three += "1,2,3\n";
    CHECK(error_of(three).find("columns") != std::string::npos);
  }

  TEST_CASE("non-monotone x is rejected") {
    std::string text = "x,xi\n";
    for (int i = 0; i < 20; ++i) text += std::to_string(i == 5 ? -1.0 : -1.0 + i * 0.1) + ",1\n";
    CHECK(error_of(text).find("strictly increasing") != std::string::npos);
  }

  TEST_CASE("windows split on the canonical grid") {
    std::vector<double> v(60, 1.0);
    const auto w = io::split_windows(v, 20);
    CHECK(w.size() == 3);
    CHECK(w[1].grid.points.back() == 1.0);
    CHECK_THROWS_AS(io::split_windows(v, 25), ValidationError);
    CHECK_THROWS_AS(io::split_windows(v, 10), ValidationError);
  }

  TEST_CASE("config round trip") {
    ExperimentConfig c;
    c.study = StudyKind::energy_rate;
    c.theta = 1.0;
    c.n_list = {500, 1000};
    c.sigma = 0.125;
    c.seed = 99;
    const io::json j = io::to_json(c);
    const ExperimentConfig back = io::config_from_json(j);
    CHECK(io::dump(io::to_json(back)) == io::dump(j));
    CHECK(back.study == StudyKind::energy_rate);
  }

  TEST_CASE("config rejects unknown keys and bad values") {
    CHECK_THROWS_AS(io::config_from_json(io::json{{"sigmaa", 1.0}}), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(io::json{{"sigma", "x"}}), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(io::json{{"n_list", {1000, 500}}}), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(io::json::array()), ValidationError);
    CHECK_NOTHROW(io::config_from_json(io::json{{"threads", 4}, {"schema", "1"}}));
  }

  TEST_CASE("numbers survive serialization exactly") {
    const double v = 0.1 + 0.2;
    const io::json j = io::json::parse(io::dump(io::json{{"v", v}}));
    CHECK(j.at("v").get<double>() == v);
  }
}
