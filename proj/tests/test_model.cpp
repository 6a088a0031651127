#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tiltsense/fringe.hpp"
#include "tiltsense/model.hpp"
#include "tiltsense/probe.hpp"
#include "tiltsense/units.hpp"

using namespace tiltsense;
using namespace tiltsense::units;

namespace {
const double kRef = wavenumber_from_lambda_nm(650.0);

ProbeConfig paper_pair(double visibility = 0.77) {
  return make_probe(2, kRef, mm_to_m(5.97), mm2_to_m2(0.70), mm2_to_m2(0.52), visibility);
}
}  // namespace

TEST_CASE("probability matches the closed form") {
  ProbeConfig p = paper_pair();
  for (double th_urad : {-20.0, -3.4, 0.0, 1.0, 3.4, 7.7, 20.0, 45.0}) {
    const double th = urad_to_rad(th_urad);
    const double phase = 4.0 * 2.0 * th * kRef * 5.97e-3;
    const double envelope = std::exp(-8.0 * 2.0 * th * th * kRef * kRef * mm2_to_m2(1.22));
    const double expected = 0.5 * (1.0 + 0.77 * std::cos(phase) * envelope);
    CHECK(projection_probability(p, th) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("coherence factor carries magnitude and linear phase") {
  ProbeConfig p = paper_pair();
  const double th = urad_to_rad(3.0);
  CoherenceFactor c = coherence(p, th);
  CHECK(c.magnitude == doctest::Approx(0.77 * std::exp(-8.0 * kRef * kRef * th * th *
                                                       p.sum_variance()))
                           .epsilon(1e-14));
  CHECK(c.phase == doctest::Approx(4.0 * kRef * th * 2.0 * 5.97e-3).epsilon(1e-14));
  CHECK(projection_probability(p, th) ==
        doctest::Approx(0.5 * (1.0 + c.magnitude * std::cos(c.phase))).epsilon(1e-14));
  // magnitude bounded by the visibility, reached only at theta = 0
  CHECK(c.magnitude < 0.77);
  CHECK(coherence(p, 0.0).magnitude == doctest::Approx(0.77));
}

TEST_CASE("probability is even in theta and in the sign of d") {
  ProbeConfig p = paper_pair();
  ProbeConfig m = make_probe(2, kRef, -5.97e-3, mm2_to_m2(0.70), mm2_to_m2(0.52), 0.77);
  for (double th_urad : {0.3, 1.7, 5.0, 12.0, 33.0}) {
    const double th = urad_to_rad(th_urad);
    CHECK(projection_probability(p, th) == projection_probability(p, -th));
    CHECK(projection_probability(p, th) == projection_probability(m, th));
  }
}

TEST_CASE("probability stays within [0,1] over a wide sweep") {
  for (double v : {0.0, 0.5, 1.0}) {
    ProbeConfig p = paper_pair(v);
    for (int i = -500; i <= 500; ++i) {
      const double th = urad_to_rad(0.4 * i);
      const double prob = projection_probability(p, th);
      CHECK(prob >= 0.0);
      CHECK(prob <= 1.0);
    }
  }
}

TEST_CASE("zero visibility flattens the fringe at 1/2") {
  ProbeConfig p = paper_pair(0.0);
  for (double th_urad : {0.0, 2.0, 10.0}) {
    CHECK(projection_probability(p, urad_to_rad(th_urad)) == 0.5);
  }
}

TEST_CASE("fringe period is pi/(2 N k d)") {
  ProbeConfig p = paper_pair(1.0);
  const double period = 2.0 * std::numbers::pi / (8.0 * kRef * 5.97e-3);
  // zero crossings of p - 1/2 sit exactly at odd quarter periods, envelope
  // notwithstanding
  for (int j : {1, 3, 5, 7}) {
    const double th = 0.25 * j * period;
    CHECK(projection_probability(p, th) == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("phase grows linearly with photon number") {
  for (int n : {1, 2, 3, 5}) {
    ProbeConfig p = make_probe(n, kRef, mm_to_m(2.0), mm2_to_m2(0.70), 0.0, 1.0);
    const double th = urad_to_rad(1.5);
    CHECK(coherence(p, th).phase == doctest::Approx(4.0 * n * kRef * th * 2.0e-3));
  }
}

TEST_CASE("derivative matches a central difference") {
  ProbeConfig p = paper_pair();
  const double h = 1e-12;
  for (double th_urad : {-8.0, -3.4, 0.0, 0.9, 3.4, 17.0}) {
    const double th = urad_to_rad(th_urad);
    const double fd =
        (projection_probability(p, th + h) - projection_probability(p, th - h)) / (2.0 * h);
    const double exact = projection_probability_derivative(p, th);
    CHECK(exact == doctest::Approx(fd).epsilon(1e-6).scale(1e4));
  }
}

TEST_CASE("derivative vanishes at theta = 0") {
  CHECK(projection_probability_derivative(paper_pair(), 0.0) == 0.0);
}

TEST_CASE("fringe_scan evaluates the grid in order") {
  ProbeConfig p = paper_pair();
  std::vector<double> grid = linspace(urad_to_rad(-10.0), urad_to_rad(10.0), 41);
  FringeCurve curve = fringe_scan(p, grid);
  CHECK(curve.count_model == CountModel::exact);
  REQUIRE(curve.records.size() == grid.size());
  CHECK_NOTHROW(curve.validate());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(curve.records[i].theta == grid[i]);
    REQUIRE(curve.records[i].probability.has_value());
    CHECK(*curve.records[i].probability == projection_probability(p, grid[i]));
  }
}

TEST_CASE("linspace endpoints are exact") {
  std::vector<double> g = linspace(-1.0, 2.0, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 2.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  std::vector<double> one = linspace(3.0, 9.0, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 3.0);
}
