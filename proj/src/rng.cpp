#include "tiltsense/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tiltsense {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  // splitmix64 sequence seeded at `seed` fills the xoshiro state; the
  // all-zero state cannot occur.
  std::uint64_t s = seed;
  for (auto& w : state_) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    w = z ^ (z >> 31);
  }
}

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return Rng(mix64(master_seed ^ mix64(stream_id)));
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

std::int64_t Rng::binomial(std::int64_t trials, double p) {
  if (trials < 0 || p < 0.0 || p > 1.0)
    throw std::invalid_argument("binomial: trials >= 0 and p in [0,1] required");
  std::int64_t successes = 0;
  for (std::int64_t i = 0; i < trials; ++i)
    if (uniform() < p) ++successes;
  return successes;
}

std::int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean >= 0 required");
  constexpr double kChunk = 32.0;
  std::int64_t count = 0;
  while (mean > kChunk) {
    count += poisson(kChunk);
    mean -= kChunk;
  }
  const double limit = std::exp(-mean);
  double prod = uniform();
  while (prod > limit) {
    ++count;
    prod *= uniform();
  }
  return count;
}

}  // namespace tiltsense
