#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "tiltsense/rng.hpp"

using namespace tiltsense;

TEST_CASE("same seed reproduces the same sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
}

TEST_CASE("derived streams are independent of each other") {
  Rng a = Rng::stream(7, 0);
  Rng b = Rng::stream(7, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (a.next_u64() == b.next_u64());
  CHECK(same == 0);
  // re-deriving gives the same stream
  Rng a2 = Rng::stream(7, 0);
  Rng a3 = Rng::stream(7, 0);
  for (int i = 0; i < 64; ++i) CHECK(a2.next_u64() == a3.next_u64());
}

TEST_CASE("uniform lies in [0,1) with mean near 1/2") {
  Rng r(3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  // se = 1/sqrt(12 n) ~ 6.5e-4; allow 5 se
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal has unit variance and zero mean") {
  Rng r(5);
  double s1 = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("binomial matches its first two moments") {
  // trials=1e4 at p=0.885: mean 8850, sd = sqrt(t p (1-p)) = 31.9
  Rng r(11);
  const int reps = 1000;
  const std::int64_t t = 10000;
  const double p = 0.885;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto x = static_cast<double>(r.binomial(t, p));
    CHECK(x >= 0);
    CHECK(x <= static_cast<double>(t));
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / reps;
  const double sd = std::sqrt(s2 / reps - mean * mean);
  const double sd_exact = std::sqrt(t * p * (1.0 - p));  // 31.91
  CHECK(std::abs(mean - 8850.0) < 5.0 * sd_exact / std::sqrt(static_cast<double>(reps)));
  CHECK(sd == doctest::Approx(sd_exact).epsilon(0.15));
}

TEST_CASE("binomial edge probabilities are exact") {
  Rng r(13);
  CHECK(r.binomial(50, 0.0) == 0);
  CHECK(r.binomial(50, 1.0) == 50);
}

TEST_CASE("poisson matches its first two moments at large mean") {
  Rng r(17);
  const double lambda = 10000.0;
  const int reps = 2000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < reps; ++i) {
    const auto x = static_cast<double>(r.poisson(lambda));
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / reps;
  const double var = s2 / reps - mean * mean;
  CHECK(std::abs(mean - lambda) < 5.0 * std::sqrt(lambda / reps));
  CHECK(var == doctest::Approx(lambda).epsilon(0.2));
}

TEST_CASE("poisson of zero mean is zero") {
  Rng r(19);
  CHECK(r.poisson(0.0) == 0);
}
