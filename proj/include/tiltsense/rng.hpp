#pragma once

#include <cstdint>

namespace tiltsense {

/// splitmix64 finalizer (Steele, Lea & Vigna).  Used to expand seeds and to
/// derive independent stream seeds from (master seed, stream id).
std::uint64_t mix64(std::uint64_t x);

/// xoshiro256++ 1.0 (Blackman & Vigna, public domain), seeded through
/// splitmix64.  Every stochastic routine in the library draws from this
/// engine, so any result is reproducible bit-for-bit from its recorded
/// (seed, stream) pair regardless of platform or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for shard or replication `stream_id` under a master
  /// seed.  Streams with distinct ids never share state.
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller (pairs generated, one cached).
  double normal();

  /// Binomial(trials, p) as an explicit Bernoulli sum.  O(trials), exact.
  std::int64_t binomial(std::int64_t trials, double p);

  /// Poisson(mean) by Knuth's multiplication method, chunked through the
  /// additivity Poisson(a+b) = Poisson(a) + Poisson(b) so the running
  /// product never underflows for large means.
  std::int64_t poisson(double mean);

 private:
  std::uint64_t state_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace tiltsense
