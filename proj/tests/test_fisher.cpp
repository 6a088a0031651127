#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tiltsense/fisher.hpp"
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

// quarter-fringe operating point for the pair probe at d = 5.97 mm
const double kThetaQ = std::numbers::pi / (16.0 * kRef * 5.97e-3);
}  // namespace

TEST_CASE("cfi_binary is the two-outcome Fisher information") {
  CHECK(cfi_binary(0.5, 2.0) == doctest::Approx(4.0 / 0.25));
  CHECK(cfi_binary(0.2, 0.0) == 0.0);
  CHECK_THROWS_AS((void)cfi_binary(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)cfi_binary(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)cfi_binary(-0.1, 1.0), std::domain_error);
}

TEST_CASE("cfi_binary_clamped counts clamp events instead of throwing") {
  long events = 0;
  const double f = cfi_binary_clamped(1.0, 1e-6, &events);
  CHECK(events == 1);
  // p clamps to 1 - eps, so F = dp^2 / (p(1-p)) ~ dp^2 / eps stays finite
  CHECK(f == doctest::Approx(1e-12 / kProbabilityClampEps).epsilon(1e-3));
  events = 0;
  CHECK(cfi_binary_clamped(0.5, 2.0, &events) == doctest::Approx(16.0));
  CHECK(events == 0);
}

TEST_CASE("closed form equals the binary route from the forward model") {
  // F = (dp/dtheta)^2 / (p(1-p)) with the analytic p and dp/dtheta must be
  // algebraically identical to the closed form
  for (double v : {0.3, 0.77, 0.999}) {
    ProbeConfig p = paper_pair(v);
    for (double th_urad : {-31.0, -3.4, 0.7, 3.4, 9.9, 24.0}) {
      const double th = urad_to_rad(th_urad);
      const double prob = projection_probability(p, th);
      const double dp = projection_probability_derivative(p, th);
      const double direct = cfi_binary(prob, dp);
      CHECK(cfi_analytic(p, th) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("qfi matches the generator-variance closed form") {
  ProbeConfig p = paper_pair();
  const double expected =
      16.0 * kRef * kRef *
      (2.0 * mm2_to_m2(0.70) + 4.0 * 5.97e-3 * 5.97e-3 + 2.0 * 1.0 * mm2_to_m2(0.52));
  CHECK(qfi(p) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(qfi(p) == doctest::Approx(216786278814.11414).epsilon(1e-12));
  CHECK(shot_noise_baseline(p) == doctest::Approx(108662246727.05835).epsilon(1e-12));
  // qfi does not depend on visibility
  CHECK(qfi(paper_pair(0.1)) == qfi(p));
}

TEST_CASE("cfi never exceeds qfi") {
  for (double v : {0.5, 0.77, 1.0}) {
    for (double d_mm : {0.0, 2.0, 5.97}) {
      ProbeConfig p = make_probe(2, kRef, mm_to_m(d_mm), mm2_to_m2(0.70), mm2_to_m2(0.52), v);
      const double bound = qfi(p);
      for (int i = 0; i <= 200; ++i) {
        const double th = urad_to_rad(-40.0 + 0.4 * i);
        CHECK(cfi_analytic(p, th) <= bound * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("ideal probe saturates the quantum bound at theta -> 0") {
  // V = 1: the binary measurement extracts the full QFI in the small-angle
  // limit, both through the guarded limit branch and just outside it
  for (double d_mm : {0.0, 2.0, 5.97}) {
    ProbeConfig p = make_probe(2, kRef, mm_to_m(d_mm), mm2_to_m2(0.70), mm2_to_m2(0.52), 1.0);
    CHECK(cfi_analytic(p, 0.0) == doctest::Approx(qfi(p)).epsilon(1e-12));
    CHECK(cfi_analytic(p, 1e-12) == doctest::Approx(qfi(p)).epsilon(1e-6));
    CHECK(cfi_analytic(p, 1e-9) == doctest::Approx(qfi(p)).epsilon(1e-4));
  }
}

TEST_CASE("degraded visibility kills the Fisher information at theta = 0") {
  ProbeConfig p = paper_pair(0.77);
  CHECK(cfi_analytic(p, 0.0) == 0.0);
}

TEST_CASE("frozen value: cfi at the quarter-fringe operating point") {
  // independently validated by finite differences in the oracle tests
  CHECK(cfi_analytic(paper_pair(), kThetaQ) ==
        doctest::Approx(121144265342.1424).epsilon(1e-12));
}

TEST_CASE("crb_variance inverts nu times the information") {
  CHECK(crb_variance(1e11, 1e4) == doctest::Approx(1e-15));
  CHECK_THROWS_AS((void)crb_variance(0.0, 100.0), unbounded_variance_error);
  CHECK_THROWS_AS((void)crb_variance(1e11, 0.0), std::invalid_argument);
}

TEST_CASE("fisher_report flags the sub-shot-noise window") {
  ProbeConfig p = paper_pair();
  FisherReport at_peak = fisher_report(p, kThetaQ);
  CHECK(at_peak.cfi > at_peak.shot_noise_baseline);
  CHECK(at_peak.sub_shot_noise);
  FisherReport at_zero = fisher_report(p, 0.0);
  CHECK(at_zero.cfi == 0.0);
  CHECK_FALSE(at_zero.sub_shot_noise);
  CHECK(at_zero.qfi == at_peak.qfi);  // theta-independent
}

TEST_CASE("fisher_scan matches pointwise reports") {
  ProbeConfig p = paper_pair();
  std::vector<double> grid = linspace(urad_to_rad(-10.0), urad_to_rad(10.0), 21);
  auto reports = fisher_scan(p, grid);
  REQUIRE(reports.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(reports[i].theta == grid[i]);
    CHECK(reports[i].cfi == cfi_analytic(p, grid[i]));
    CHECK(reports[i].qfi == qfi(p));
  }
}

TEST_CASE("scaling_sweep under maximal correlation is exactly Heisenberg") {
  ScalingTemplate tmpl{kRef, mm2_to_m2(0.70), mm_to_m(5.97), CovRule::max};
  ScalingTable table = scaling_sweep(tmpl, 10);
  REQUIRE(table.rows.size() == 10);
  const double base = table.rows[0].qfi;
  for (const ScalingRow& row : table.rows) {
    CHECK(row.qfi / base == doctest::Approx(row.n * row.n).epsilon(1e-12));
    CHECK(row.baseline == doctest::Approx(row.n * base).epsilon(1e-12));
    if (row.n == 1)
      CHECK(std::isnan(row.exponent_so_far));
    else
      CHECK(row.exponent_so_far == doctest::Approx(2.0).epsilon(1e-10));
  }
  CHECK(table.exponent == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("scaling_sweep of independent photons") {
  // no displacement: shot-noise scaling, exponent 1
  ScalingTemplate flat{kRef, mm2_to_m2(0.70), 0.0, CovRule::zero};
  CHECK(scaling_sweep(flat, 10).exponent == doctest::Approx(1.0).epsilon(0.01));
  // d = 10 sigma: the N^2 d^2 term dominates but never fully wins
  const double sigma = std::sqrt(mm2_to_m2(0.70));
  ScalingTemplate displaced{kRef, mm2_to_m2(0.70), 10.0 * sigma, CovRule::zero};
  const double expo = scaling_sweep(displaced, 10).exponent;
  CHECK(expo > 1.9);
  CHECK(expo < 2.0);
}

TEST_CASE("scaling_sweep validates n_max") {
  ScalingTemplate tmpl{kRef, mm2_to_m2(0.70), 0.0, CovRule::zero};
  CHECK_THROWS_AS((void)scaling_sweep(tmpl, 1), std::invalid_argument);
}
