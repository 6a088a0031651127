#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tiltsense/fringe.hpp"
#include "tiltsense/parallel.hpp"
#include "tiltsense/probe.hpp"

namespace tiltsense {

/// Synthetic fringe data over a theta grid.  Point i draws from the stream
/// (seed, i), so the curve is identical for any worker count and any grid
/// point can be regenerated in isolation.  poisson_pair redraws the rare
/// zero-total outcome: a point with no coincidences carries no data.
FringeCurve synthesize_counts(const ProbeConfig& probe, std::span<const double> theta_grid,
                              std::int64_t trials_per_point, std::uint64_t seed,
                              CountModel count_model, Exec exec = Exec::parallel);

/// A maximal interval between adjacent stationary points of p(theta), on
/// which p is strictly monotonic.
struct Branch {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double p_lo = 0.0;  ///< p(theta_lo)
  double p_hi = 0.0;  ///< p(theta_hi)

  bool increasing() const { return p_hi > p_lo; }
  double width() const { return theta_hi - theta_lo; }
};

/// Monotonic branch containing theta0 in its interior, located by scanning
/// dp/dtheta for sign changes outward from theta0 and bisecting each bracket.
/// Throws std::invalid_argument when theta0 is itself a stationary point
/// (fringe extremum, or theta = 0), where no such branch exists.
Branch branch_around(const ProbeConfig& probe, double theta0);

struct MleResult {
  double theta_hat = 0.0;
  double p_hat = 0.0;
  bool clipped = false;  ///< p_hat fell outside the branch's range
};

/// Maximum-likelihood angle from a binomial fringe point: p_hat inverted
/// through p(theta) by bisection on the branch, to 1e-12 of the branch width.
/// p_hat outside [min(p_lo, p_hi), max(p_lo, p_hi)] clips to the nearest
/// endpoint and is flagged.  A flat branch (dp/dtheta = 0 throughout) is
/// rejected.
MleResult mle_theta(double p_hat, const ProbeConfig& probe, const Branch& branch);
MleResult mle_theta(const FringeRecord& point, const ProbeConfig& probe, const Branch& branch);

/// Weighted nonlinear least-squares fit of the fringe model
///   p(theta) = (1 + V cos(4 N k theta d) exp(-8 N k^2 theta^2 s2)) / 2
/// in (V, s2 = sigma_(N)^2, d).  Since p is even in d, the fit reports the
/// d >= 0 representative.
struct FitResult {
  double visibility_hat = 0.0;
  double sigma2_ell_hat = 0.0;  ///< meters^2
  double d_hat = 0.0;           ///< meters, canonicalized >= 0
  double residual_sum_squares = 0.0;
  std::array<double, 3> parameter_errors{};  ///< (V, s2, d) standard errors
  Eigen::Matrix3d parameter_covariance = Eigen::Matrix3d::Zero();
  int n_photons = 0;        ///< probe context the curve was fitted under
  double wavenumber_k = 0.0;
  bool converged = false;
  int iterations = 0;
  bool d_fixed_to_zero = false;  ///< the frequency scan could not resolve d
  std::vector<double> objective_trace;  ///< accepted objectives, nonincreasing
};

/// Fit a fringe curve.  Weights are inverse binomial variances
/// max(p(1-p)/trials, 1/(4 trials^2)) when every record carries counts,
/// uniform otherwise.  Initialization: V from the data's peak-to-peak range,
/// d from the dominant non-DC frequency of a zero-padded Fourier scan
/// (ties toward lower frequency), s2 from log-envelope regression.  Refined
/// by Levenberg-Marquardt with monotone accepted steps.  When the frequency
/// scan cannot distinguish d from 0 (under 3/4 of a cycle across the span)
/// the fit runs both with d fixed at 0 and free; lower residual wins, ties go
/// to the fixed (fewer-parameter) fit.  Requires at least 8 points.
FitResult fit_fringe(const FringeCurve& curve, int n_photons, double wavenumber_k);

/// Classical Fisher information at the fitted parameters with a first-order
/// error band, band_sigmas standard errors wide, clamped at 0 below.
struct FitFisherRow {
  double theta = 0.0;
  double cfi = 0.0;
  double cfi_lower = 0.0;
  double cfi_upper = 0.0;
};

std::vector<FitFisherRow> fisher_report_from_fit(const FitResult& fit,
                                                 std::span<const double> theta_grid,
                                                 double band_sigmas = 2.0);

/// Cramer-Rao saturation experiment: `replications` independent runs of
/// `trials` shots at theta_true, each inverted by mle_theta on the branch
/// around theta_true, compared against the variance floor 1/(trials * F).
struct SaturationResult {
  double theta_true = 0.0;
  double theta_hat_mean = 0.0;
  double empirical_mse = 0.0;
  double crb = 0.0;
  double ratio = 0.0;  ///< empirical_mse / crb
  std::int64_t clipped_replications = 0;
  std::int64_t replications = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Replication r draws from the stream (seed, r); statistics are merged in
/// replication order, so the result is identical for any worker count.
/// Throws unbounded_variance_error when F(theta_true) = 0.
SaturationResult saturation_experiment(const ProbeConfig& probe, double theta_true,
                                       std::int64_t trials, std::int64_t replications,
                                       std::uint64_t seed,
                                       CountModel count_model = CountModel::binomial,
                                       Exec exec = Exec::parallel);

}  // namespace tiltsense
