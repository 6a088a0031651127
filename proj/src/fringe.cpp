#include "tiltsense/fringe.hpp"

#include <stdexcept>
#include <string>

namespace tiltsense {

void FringeCurve::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i > 0 && !(r.theta > records[i - 1].theta))
      throw std::invalid_argument("fringe curve: theta values must be strictly increasing");
    if (r.probability) {
      if (!(*r.probability >= 0.0 && *r.probability <= 1.0))
        throw std::invalid_argument("fringe curve: probability outside [0, 1] at record " +
                                    std::to_string(i));
    } else {
      if (!r.successes || !r.trials)
        throw std::invalid_argument(
            "fringe curve: record " + std::to_string(i) +
            " needs a probability or a (successes, trials) pair");
      if (*r.trials < 1 || *r.successes < 0 || *r.successes > *r.trials)
        throw std::invalid_argument("fringe curve: need 0 <= successes <= trials, trials >= 1 " +
                                    std::string("at record ") + std::to_string(i));
    }
  }
}

double FringeCurve::probability_at(std::size_t i) const {
  const auto& r = records.at(i);
  if (r.probability) return *r.probability;
  return static_cast<double>(*r.successes) / static_cast<double>(*r.trials);
}

bool FringeCurve::has_counts() const {
  return !records.empty() && records.front().successes.has_value();
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

}  // namespace tiltsense
