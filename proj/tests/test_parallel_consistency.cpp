#ifdef _OPENMP
#include <omp.h>
#endif

#include <vector>

#include "doctest.h"
#include "tiltsense/estimate.hpp"
#include "tiltsense/fringe.hpp"
#include "tiltsense/model.hpp"
#include "tiltsense/oracle.hpp"
#include "tiltsense/parallel.hpp"
#include "tiltsense/probe.hpp"
#include "tiltsense/units.hpp"

using namespace tiltsense;
using namespace tiltsense::units;

namespace {
ProbeConfig paper_pair() {
  return make_probe(2, wavenumber_from_lambda_nm(650.0), mm_to_m(5.97), mm2_to_m2(0.70),
                    mm2_to_m2(0.52), 0.77);
}

// run fn under 1, 2, and all hardware workers; every result must be
// bit-identical to the serial reference
template <typename Fn>
void check_worker_invariance(Fn&& fn) {
#ifdef _OPENMP
  const int full = omp_get_max_threads();
  for (int workers : {1, 2, full}) {
    omp_set_num_threads(workers);
    fn();
  }
  omp_set_num_threads(full);
#else
  fn();
#endif
}
}  // namespace

TEST_CASE("fringe_scan is identical under any worker count") {
  ProbeConfig p = paper_pair();
  std::vector<double> grid = linspace(urad_to_rad(-50.0), urad_to_rad(50.0), 501);
  FringeCurve serial = fringe_scan(p, grid, Exec::serial);
  check_worker_invariance([&] {
    FringeCurve parallel = fringe_scan(p, grid, Exec::parallel);
    REQUIRE(parallel.records.size() == serial.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
      CHECK(*parallel.records[i].probability == *serial.records[i].probability);
    }
  });
}

TEST_CASE("quadrature_scan is identical under any worker count") {
  ProbeConfig p = paper_pair();
  std::vector<double> grid = linspace(urad_to_rad(-20.0), urad_to_rad(20.0), 41);
  std::vector<double> serial = quadrature_scan(p, grid, {}, Exec::serial);
  check_worker_invariance([&] {
    std::vector<double> parallel = quadrature_scan(p, grid, {}, Exec::parallel);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(parallel[i] == serial[i]);
  });
}

TEST_CASE("synthesize_counts draws identical counts under any worker count") {
  ProbeConfig p = paper_pair();
  std::vector<double> grid = linspace(urad_to_rad(-50.0), urad_to_rad(50.0), 200);
  for (CountModel cm : {CountModel::binomial, CountModel::poisson_pair}) {
    FringeCurve serial = synthesize_counts(p, grid, 5000, 11, cm, Exec::serial);
    check_worker_invariance([&] {
      FringeCurve parallel = synthesize_counts(p, grid, 5000, 11, cm, Exec::parallel);
      REQUIRE(parallel.records.size() == serial.records.size());
      for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(*parallel.records[i].successes == *serial.records[i].successes);
        CHECK(*parallel.records[i].trials == *serial.records[i].trials);
      }
    });
  }
}

TEST_CASE("Monte Carlo QFI merges shards identically under any worker count") {
  ProbeConfig p = paper_pair();
  McEstimate serial = mc_generator_variance_qfi(p, 100000, 123, Exec::serial);
  check_worker_invariance([&] {
    McEstimate parallel = mc_generator_variance_qfi(p, 100000, 123, Exec::parallel);
    CHECK(parallel.value == serial.value);
    CHECK(parallel.std_error == serial.std_error);
  });
}

TEST_CASE("saturation_experiment is identical under any worker count") {
  ProbeConfig p = paper_pair();
  const double theta_q = 3.4024288107202689e-06;
  SaturationResult serial =
      saturation_experiment(p, theta_q, 2000, 300, 7, CountModel::binomial, Exec::serial);
  check_worker_invariance([&] {
    SaturationResult parallel = saturation_experiment(p, theta_q, 2000, 300, 7,
                                                      CountModel::binomial, Exec::parallel);
    CHECK(parallel.theta_hat_mean == serial.theta_hat_mean);
    CHECK(parallel.empirical_mse == serial.empirical_mse);
    CHECK(parallel.clipped_replications == serial.clipped_replications);
  });
}

TEST_CASE("for_each_index covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  for_each_index(Exec::parallel, hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  std::vector<int> serial_hits(1000, 0);
  for_each_index(Exec::serial, serial_hits.size(), [&](std::size_t i) { serial_hits[i] += 1; });
  for (int h : serial_hits) CHECK(h == 1);
}
