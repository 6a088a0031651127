#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tiltsense/parallel.hpp"
#include "tiltsense/probe.hpp"

namespace tiltsense {

/// Quadrature grid for the brute-force probability integrals, sized in units
/// of the largest marginal standard deviation.  The default 6-sigma extent
/// keeps the truncated Gaussian mass below 1e-9 per tail.
struct GridSpec {
  double half_width_sigmas = 6.0;
  int points_per_axis = 0;  ///< 0 resolves to 4096 in 1D, 512 in 2D

  int resolved_points(int dimensions) const;
  void validate() const;
};

/// The requested angle oscillates faster than the grid can represent
/// (integrand period under 8 grid steps).
struct resolution_error : std::runtime_error {
  explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

/// Brute-force projection probability by trapezoidal quadrature of the
/// density-weighted cosine integral over the discretized spatial state.
/// Supports N = 1 and N = 2; a rank-deficient pair covariance (|C| = 1) is
/// reparameterized to the 1D support rather than jittered.
double quadrature_probability(const ProbeConfig& probe, double theta,
                              const GridSpec& grid = {});

/// quadrature_probability over a theta grid; the per-probe density tables are
/// built once and shared, points evaluate independently.
std::vector<double> quadrature_scan(const ProbeConfig& probe,
                                    std::span<const double> theta_grid,
                                    const GridSpec& grid = {},
                                    Exec exec = Exec::parallel);

struct FdCfi {
  double cfi = 0.0;
  double delta_p = 0.0;    ///< p(theta+h) - p(theta-h)
  double step = 0.0;       ///< the h actually used
  bool cancellation = false;  ///< |delta_p| < 64 machine epsilon
};

/// Central-difference derivative of the analytic probability fed through the
/// binary-measurement Fisher formula.  step <= 0 selects the adaptive step
/// max(1e-9, 1e-4 / (4 N k |d| + 4 k sigma_ell)).
FdCfi finite_difference_cfi(const ProbeConfig& probe, double theta, double step = 0.0);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
};

/// Monte Carlo estimate of the quantum Fisher information as four times the
/// sample variance of h = 2 k s sum_j x_j, with s = +-1 the GHZ branch sign
/// and x drawn from the probe's Gaussian spatial state.  Unbiased because
/// <h> = 0 and s^2 = 1.  Work is split over a fixed number of shards, each
/// with its own stream derived from (seed, shard); the merged estimate is
/// identical for any worker count.
McEstimate mc_generator_variance_qfi(const ProbeConfig& probe, std::int64_t samples,
                                     std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace tiltsense
