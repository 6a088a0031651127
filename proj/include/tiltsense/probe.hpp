#pragma once

#include <Eigen/Dense>

namespace tiltsense {

/// Physical configuration of an N-photon probe: a GHZ polarization state plus
/// a jointly Gaussian transverse spatial state in which every photon has mean
/// position d, variance sigma^2, and every pair shares one covariance value
/// (the photons are exchange symmetric).
///
/// Immutable after construction; construction validates all invariants:
///   sigma2 > 0, |cov| <= sigma2, cov >= -sigma2/(N-1)  (positive
///   semidefinite N x N covariance), visibility in [0, 1].
class ProbeConfig {
 public:
  ProbeConfig(int n_photons, double wavenumber_k, double displacement_d,
              double sigma2, double pairwise_cov, double visibility);

  int n_photons() const { return n_; }
  double wavenumber_k() const { return k_; }
  double displacement_d() const { return d_; }
  double sigma2() const { return sigma2_; }
  double pairwise_cov() const { return cov_; }
  double visibility() const { return visibility_; }

  /// Effective per-photon variance sigma_(l)^2 = sigma^2 + (l-1) Cov that
  /// drives the fringe damping.
  double sigma2_ell() const { return sigma2_ + (n_ - 1) * cov_; }

  /// Var[x_1 + ... + x_N] = N sigma^2 + N(N-1) Cov = N sigma_(N)^2.
  double sum_variance() const { return n_ * sigma2_ell(); }

 private:
  int n_;
  double k_, d_, sigma2_, cov_, visibility_;
};

/// Validating constructor wrapper.  For n == 1 the covariance has no partner
/// photon to refer to and is stored as 0.
ProbeConfig make_probe(int n, double k, double d, double sigma2, double cov,
                       double visibility);

/// C = Cov[x1, x2] / sigma^2 in [-1, 1].  Undefined (throws) for n == 1.
double correlation_coefficient(const ProbeConfig& probe);

/// Mean vector and covariance matrix of the N transverse positions.
/// Construction checks symmetry and positive semidefiniteness (eigenvalues
/// >= -1e-12 relative to the largest one).
struct GaussianSpatialState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  GaussianSpatialState(Eigen::VectorXd mean_in, Eigen::MatrixXd covariance_in);

  /// Var[sum_j x_j] = 1^T C 1, independent bookkeeping route for sigma_(l)^2.
  double sum_variance() const { return covariance.sum(); }
};

/// Explicit (mean, covariance) of the probe's spatial state.
GaussianSpatialState spatial_state(const ProbeConfig& probe);

/// The N-qubit GHZ polarization state (|0...0> + |1...1>)/sqrt(2) with
/// sigma_z = |H><H| - |V><V|.  Only its second moments enter the toolkit.
struct PolarizationModel {
  enum class Kind { ghz };
  Kind kind = Kind::ghz;

  static constexpr double sigma_z_mean() { return 0.0; }       // <sigma_z,j>
  static constexpr double sigma_z_pair_mean() { return 1.0; }  // <sigma_z,i sigma_z,j>
};

}  // namespace tiltsense
