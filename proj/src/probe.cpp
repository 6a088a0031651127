#include "tiltsense/probe.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tiltsense {

namespace {

// Relative slack applied to the covariance inequalities so boundary cases
// (Cov = sigma^2, Cov = -sigma^2/(N-1)) survive decimal-to-binary rounding.
constexpr double kPsdTol = 1e-12;

}  // namespace

ProbeConfig::ProbeConfig(int n_photons, double wavenumber_k, double displacement_d,
                         double sigma2, double pairwise_cov, double visibility)
    : n_(n_photons),
      k_(wavenumber_k),
      d_(displacement_d),
      sigma2_(sigma2),
      cov_(pairwise_cov),
      visibility_(visibility) {
  if (n_ < 1) throw std::invalid_argument("probe: n_photons must be >= 1");
  if (!(k_ > 0.0) || !std::isfinite(k_))
    throw std::invalid_argument("probe: wavenumber k must be positive");
  if (!std::isfinite(d_)) throw std::invalid_argument("probe: displacement must be finite");
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_))
    throw std::invalid_argument("probe: sigma2 must be positive");
  if (!(visibility_ >= 0.0 && visibility_ <= 1.0))
    throw std::invalid_argument("probe: visibility must lie in [0, 1]");
  if (n_ == 1) {
    cov_ = 0.0;  // no partner photon
    return;
  }
  if (!std::isfinite(cov_)) throw std::invalid_argument("probe: covariance must be finite");
  const double slack = kPsdTol * sigma2_;
  if (std::abs(cov_) > sigma2_ + slack)
    throw std::invalid_argument("probe: |Cov| <= sigma2 violated (Cauchy-Schwarz)");
  // Uniform-correlation matrix is PSD iff Cov >= -sigma2/(N-1).
  if (cov_ < -sigma2_ / (n_ - 1) - slack)
    throw std::invalid_argument(
        "probe: covariance matrix not positive semidefinite: Cov < -sigma2/(N-1)");
}

ProbeConfig make_probe(int n, double k, double d, double sigma2, double cov,
                       double visibility) {
  return ProbeConfig(n, k, d, sigma2, cov, visibility);
}

double correlation_coefficient(const ProbeConfig& probe) {
  if (probe.n_photons() < 2)
    throw std::logic_error("correlation_coefficient: undefined for a single photon");
  return probe.pairwise_cov() / probe.sigma2();
}

GaussianSpatialState::GaussianSpatialState(Eigen::VectorXd mean_in,
                                           Eigen::MatrixXd covariance_in)
    : mean(std::move(mean_in)), covariance(std::move(covariance_in)) {
  const auto n = mean.size();
  if (n < 1 || covariance.rows() != n || covariance.cols() != n)
    throw std::invalid_argument("spatial state: covariance must be N x N for an N-vector mean");
  if (!covariance.isApprox(covariance.transpose(), 1e-12))
    throw std::invalid_argument("spatial state: covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance,
                                                        Eigen::EigenvaluesOnly);
  const double max_eig = solver.eigenvalues().maxCoeff();
  const double floor = -1e-12 * std::max(max_eig, 0.0);
  if (max_eig < 0.0 || solver.eigenvalues().minCoeff() < floor)
    throw std::invalid_argument("spatial state: covariance is not positive semidefinite");
}

GaussianSpatialState spatial_state(const ProbeConfig& probe) {
  const int n = probe.n_photons();
  Eigen::VectorXd mean = Eigen::VectorXd::Constant(n, probe.displacement_d());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(n, n, probe.pairwise_cov());
  cov.diagonal().setConstant(probe.sigma2());
  return GaussianSpatialState(std::move(mean), std::move(cov));
}

}  // namespace tiltsense
