#include "tiltsense/model.hpp"

#include <cmath>
#include <stdexcept>

namespace tiltsense {

CoherenceFactor coherence(const ProbeConfig& probe, double theta) {
  const double k = probe.wavenumber_k();
  const double n = probe.n_photons();
  // Sign convention: H picks up e^{-i 2 k theta x}.  p is even in that sign.
  const double phase = 4.0 * k * theta * n * probe.displacement_d();
  const double exponent = 8.0 * k * k * theta * theta * probe.sum_variance();
  return {probe.visibility() * std::exp(-exponent), phase};
}

double projection_probability(const ProbeConfig& probe, double theta) {
  const CoherenceFactor c = coherence(probe, theta);
  return 0.5 * (1.0 + c.magnitude * std::cos(c.phase));
}

double projection_probability_derivative(const ProbeConfig& probe, double theta) {
  const double k = probe.wavenumber_k();
  const double n = probe.n_photons();
  const double var_s = probe.sum_variance();
  const double phase = 4.0 * k * theta * n * probe.displacement_d();
  const double envelope = probe.visibility() * std::exp(-8.0 * k * k * theta * theta * var_s);
  // d/dtheta of (1 + V e^{-8k^2 th^2 VarS} cos(4 k th N d)) / 2
  return -0.5 * envelope *
         (4.0 * k * n * probe.displacement_d() * std::sin(phase) +
          16.0 * k * k * theta * var_s * std::cos(phase));
}

FringeCurve fringe_scan(const ProbeConfig& probe, std::span<const double> theta_grid,
                        Exec exec) {
  if (theta_grid.empty()) throw std::invalid_argument("fringe_scan: empty theta grid");
  for (std::size_t i = 1; i < theta_grid.size(); ++i)
    if (!(theta_grid[i] > theta_grid[i - 1]))
      throw std::invalid_argument("fringe_scan: theta grid must be strictly increasing");

  FringeCurve curve;
  curve.count_model = CountModel::exact;
  curve.records.resize(theta_grid.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(theta_grid.size()), [&](std::ptrdiff_t i) {
    auto& rec = curve.records[static_cast<std::size_t>(i)];
    rec.theta = theta_grid[static_cast<std::size_t>(i)];
    rec.probability = projection_probability(probe, rec.theta);
  });
  return curve;
}

}  // namespace tiltsense
