#include "doctest.h"

#include <cmath>
#include <numeric>

#include <boost/math/special_functions/zeta.hpp>

#include "orthoden/coefficients.hpp"
#include "orthoden/design.hpp"
#include "orthoden/error.hpp"

using namespace orthoden;

TEST_SUITE("design") {
  TEST_CASE("uniform grid") {
    const DesignGrid g = make_grid(15);
    CHECK(g.points.front() == -1.0);
    CHECK(g.points.back() == 1.0);
    CHECK(g.points[7] == doctest::Approx(0.0));
    CHECK(g.spacing() == doctest::Approx(2.0 / 14.0));
    const DesignGrid h = make_grid(21, {0.0, 1.0});
    CHECK(h.points.front() == 0.0);
    CHECK(h.points.back() == 1.0);
    CHECK(h.points[10] == doctest::Approx(0.5));
    CHECK_THROWS_AS(make_grid(14), ValidationError);
  }

  TEST_CASE("unit noise laws are centred with unit variance") {
    for (NoiseLaw law : {NoiseLaw::gaussian, NoiseLaw::uniform, NoiseLaw::weibull_tail}) {
      CAPTURE(to_string(law));
      const NoiseModel m = make_noise(law, 1.0, 7);
      const std::vector<double> e = draw_unit_noise(m, 200000, 3);
      const double mean = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
      double var = 0.0;
      for (double v : e) var += (v - mean) * (v - mean);
      var /= e.size() - 1;
      CHECK(std::abs(mean) < 0.01);
      CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    }
  }

  TEST_CASE("noise is reproducible per seed and stream") {
    const NoiseModel m = make_noise(NoiseLaw::gaussian, 0.3, 11);
    CHECK(draw_unit_noise(m, 50, 2) == draw_unit_noise(m, 50, 2));
    CHECK(draw_unit_noise(m, 50, 2) != draw_unit_noise(m, 50, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  }

  TEST_CASE("tail bounds hold for the stated parameters") {
    for (NoiseLaw law : {NoiseLaw::gaussian, NoiseLaw::uniform, NoiseLaw::weibull_tail}) {
      const NoiseModel m = make_noise(law, 1.0, 0);
      for (double u = 0.25; u <= 6.0; u += 0.25) CHECK(m.tail_probability(u) <= m.tail_bound(u) * (1.0 + 1e-12));
    }
    // Q = 1 would fail for the Gaussian: P(Z > 2) = 0.02275 > e^-4
    const NoiseModel g = make_noise(NoiseLaw::gaussian, 1.0, 0);
    CHECK(g.tail_probability(2.0) == doctest::Approx(0.022750131948179).epsilon(1e-9));
    CHECK(g.tail_probability(2.0) > std::exp(-4.0));
    CHECK(g.big_q == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("spectral decay coefficients") {
    SpectralDecayModel m;
    m.delta = 1.0;
    const std::vector<double> c = synth_coefficients(m, 10);
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[3] == doctest::Approx(std::pow(4.0, -1.5)));
    m.signs = SignConvention::alternating;
    CHECK(synth_coefficients(m, 3)[1] < 0.0);
    m.delta = 0.0;
    CHECK_THROWS_AS(synth_coefficients(m, 3), ValidationError);
    m.delta = 1.0;
    m.log_power = 3.0;
    CHECK_THROWS_AS(synth_coefficients(m, 3), ValidationError);
  }

  TEST_CASE("random signs are seeded") {
    SpectralDecayModel m;
    m.signs = SignConvention::random;
    m.sign_seed = 5;
    const auto a = synth_coefficients(m, 64), b = synth_coefficients(m, 64);
    CHECK(a == b);
    std::size_t neg = 0;
    for (double v : a) neg += v < 0.0;
    CHECK(neg > 10);
    CHECK(neg < 54);
  }

  TEST_CASE("tail energy") {
    const std::vector<double> c{3.0, 2.0, 1.0};
    CHECK(tail_energy(c, 0) == doctest::Approx(14.0));
    CHECK(tail_energy(c, 1) == doctest::Approx(5.0));
    CHECK(tail_energy(c, 3) == 0.0);
  }

  TEST_CASE("tail ratio condition") {
    SpectralDecayModel m;
    m.delta = 1.0;
    const std::vector<std::size_t> ns{10, 100, 1000};
    const TailRatioReport r = tail_ratio_check(m, ns);
    CHECK(r.verdict == TailVerdict::plausible);
    for (double q : r.ratios) CHECK(q == doctest::Approx(0.25).epsilon(0.05));
    // finite truth has rho(N) = 0 beyond its support
    const std::vector<double> finite{1.0, 0.5, 0.25};
    CHECK(tail_ratio_check(finite, ns).verdict == TailVerdict::inapplicable);
    // geometric decay: rho(2N)/rho(N) -> 0
    std::vector<double> geo(200);
    for (std::size_t k = 0; k < geo.size(); ++k) geo[k] = std::pow(0.5, static_cast<double>(k));
    const std::vector<std::size_t> small{5, 10, 20};
    CHECK(tail_ratio_check(geo, small).verdict == TailVerdict::implausible);
  }

  TEST_CASE("grid weights cancel the leading endpoint error") {
    // h times the weighted grid sum for gamma = (1-x)^-0.25 (1+x)^-0.25 against the mass
    const WeightFunction w = WeightFunction::jacobi(-0.25, -0.25);
    const double mass = weight_constants(w).mass;
    double prev = 1.0;
    for (std::size_t n : {1001, 4001, 16001}) {
      const DesignGrid g = make_grid(n);
      const std::vector<double> gw = grid_weights(w, g);
      const double s = g.spacing() * std::accumulate(gw.begin(), gw.end(), 0.0);
      const double err = std::abs(s - mass);
      // without the endpoint values the defect is about -2 zeta(0.25) h^0.75 2^-0.25
      const double raw = 2.0 * std::abs(boost::math::zeta(0.25)) * std::pow(g.spacing(), 0.75) * std::pow(2.0, -0.25);
      CHECK(err < 0.1 * raw);
      CHECK(err < prev);
      prev = err;
    }
    // s = 0: the trapezoid half weight
    const DesignGrid g = make_grid(101);
    const std::vector<double> lg = grid_weights(WeightFunction::jacobi(0.0, 0.0), g);
    CHECK(lg.front() == doctest::Approx(0.5 * 101.0 / 100.0));
    CHECK(lg[50] == doctest::Approx(1.0));
  }

  TEST_CASE("sampled signal carries the truth") {
    const OrthonormalBasis b = build_basis(WeightFunction::jacobi(0.0, 0.0), 5);
    const std::vector<double> truth{0.0, 1.0};
    const DesignGrid g = make_grid(31);
    const SampledSignal s = sample_signal(truth, b, g, make_noise(NoiseLaw::gaussian, 0.0, 1));
    REQUIRE(s.truth);
    CHECK(s.size() == 31);
    // phi_2 = sqrt(3/2) x on [-1, 1]
    CHECK(s.xi.back() == doctest::Approx(std::sqrt(1.5)));
    const SampledSignal t = sample_signal(truth, b, g, make_noise(NoiseLaw::gaussian, 0.5, 1), 4);
    CHECK(t.xi != s.xi);
    CHECK_THROWS_AS(signal_values(truth, b, make_grid(31, {0.0, 1.0})), ValidationError);
  }
}
