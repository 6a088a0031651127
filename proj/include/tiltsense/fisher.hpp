#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "tiltsense/parallel.hpp"
#include "tiltsense/probe.hpp"

namespace tiltsense {

/// Classical / quantum Fisher information of one probe at one angle,
/// alongside the shot-noise baseline of N independent ideal photons.
struct FisherReport {
  double theta = 0.0;
  double cfi = 0.0;
  double qfi = 0.0;
  double shot_noise_baseline = 0.0;
  bool sub_shot_noise = false;  ///< cfi > shot_noise_baseline
};

/// Fisher information of a two-outcome measurement:
/// (dp/dtheta)^2 / (p (1 - p)).  Throws std::domain_error for p outside
/// (0, 1), where the expression is singular.
double cfi_binary(double p, double dp_dtheta);

/// Probabilities are clamped into [eps, 1-eps] before evaluation so rounding
/// at fringe extrema cannot blow up the division; *clamp_events counts how
/// often the clamp fired.
inline constexpr double kProbabilityClampEps = 1e-12;
double cfi_binary_clamped(double p, double dp_dtheta, long* clamp_events = nullptr);

/// Closed-form classical Fisher information of the binary fringe measurement,
/// parameterized directly by the effective variance sigma2_ell
/// (= sigma^2 + (N-1) Cov).  Valid for every N under the GHZ + uniform
/// Gaussian correlation model.  The denominator is evaluated as
/// expm1(.) + (1 - V^2) + V^2 sin^2(.), which is cancellation-free; the
/// V = 1 indeterminate point is resolved by its analytic theta -> 0 limit
/// below |theta| k max(sigma_ell, |d|) < 1e-8.
double cfi_closed_form(int n_photons, double k, double visibility, double sigma2_ell,
                       double d, double theta);

/// cfi_closed_form evaluated at a probe's parameters.
double cfi_analytic(const ProbeConfig& probe, double theta);

/// Quantum Fisher information 16 k^2 (N sigma^2 + N^2 d^2 + N(N-1) Cov):
/// four times the generator variance for the GHZ x Gaussian probe.
/// Independent of theta.
double qfi(const ProbeConfig& probe);

/// N * 16 k^2 (sigma^2 + d^2): N independent, uncorrelated, ideal-visibility
/// photons with the same per-photon optics.
double shot_noise_baseline(const ProbeConfig& probe);

/// Thrown by crb_variance when the Fisher information vanishes and the
/// variance floor is unbounded.
struct unbounded_variance_error : std::domain_error {
  unbounded_variance_error() : std::domain_error("Cramer-Rao variance is unbounded: F = 0") {}
};

/// Cramer-Rao variance floor 1/(nu F).
double crb_variance(double fisher_value, double repetitions);

FisherReport fisher_report(const ProbeConfig& probe, double theta);
std::vector<FisherReport> fisher_scan(const ProbeConfig& probe,
                                      std::span<const double> theta_grid,
                                      Exec exec = Exec::parallel);

/// Covariance rule for scaling sweeps: independent photons or maximal
/// correlation Cov = sigma^2.
enum class CovRule { zero, max };

struct ScalingTemplate {
  double k = 0.0;
  double sigma2 = 0.0;
  double d = 0.0;
  CovRule cov_rule = CovRule::max;
};

struct ScalingRow {
  int n = 0;
  double qfi = 0.0;
  double baseline = 0.0;
  double exponent_so_far = 0.0;  ///< log-log slope over rows 1..n (NaN for n = 1)
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double exponent = 0.0;  ///< log-log fitted exponent over all rows
};

/// QFI and shot-noise baseline for N = 1..n_max under the template.
ScalingTable scaling_sweep(const ScalingTemplate& tmpl, int n_max);

}  // namespace tiltsense
