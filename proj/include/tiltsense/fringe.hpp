#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace tiltsense {

/// How synthetic counts were produced for a curve.
///   exact        - probability column equals the forward model, no noise
///   binomial     - successes ~ Binomial(trials, p)
///   poisson_pair - total ~ Poisson(trials), successes ~ Binomial(total, p),
///                  matching coincidence-counting statistics
enum class CountModel { exact, binomial, poisson_pair };

struct FringeRecord {
  double theta = 0.0;  // radians
  std::optional<double> probability;
  std::optional<std::int64_t> successes;
  std::optional<std::int64_t> trials;
};

/// Sampled (theta, probability, count) records: the unit of simulation output
/// and fit input.  Thetas are strictly increasing; each record carries either
/// a probability or a (successes, trials) pair with successes <= trials.
struct FringeCurve {
  std::vector<FringeRecord> records;
  CountModel count_model = CountModel::exact;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  /// Probability of record i: the stored column, or successes/trials.
  double probability_at(std::size_t i) const;

  bool has_counts() const;
};

/// n evenly spaced values from lo to hi inclusive (n == 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace tiltsense
