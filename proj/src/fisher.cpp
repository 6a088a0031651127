#include "tiltsense/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tiltsense {

double cfi_binary(double p, double dp_dtheta) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("cfi_binary: p must lie strictly inside (0, 1)");
  return dp_dtheta * dp_dtheta / (p * (1.0 - p));
}

double cfi_binary_clamped(double p, double dp_dtheta, long* clamp_events) {
  if (p < kProbabilityClampEps || p > 1.0 - kProbabilityClampEps) {
    if (clamp_events) ++*clamp_events;
    p = std::clamp(p, kProbabilityClampEps, 1.0 - kProbabilityClampEps);
  }
  return dp_dtheta * dp_dtheta / (p * (1.0 - p));
}

double cfi_closed_form(int n_photons, double k, double visibility, double sigma2_ell,
                       double d, double theta) {
  const double n = n_photons;
  const double v2 = visibility * visibility;
  const double sigma_ell = std::sqrt(sigma2_ell);

  if (visibility == 1.0 &&
      std::abs(theta) * k * std::max(sigma_ell, std::abs(d)) < 1e-8) {
    // 0/0 point of the printed form; the limit equals the quantum Fisher
    // information 16 N k^2 (sigma_ell^2 + N d^2).
    return 16.0 * n * k * k * (sigma2_ell + n * d * d);
  }

  const double phase = 4.0 * n * theta * k * d;
  const double s = std::sin(phase);
  const double c = std::cos(phase);
  const double num_root = d * s + 4.0 * k * theta * sigma2_ell * c;
  const double numerator = 16.0 * v2 * n * n * k * k * num_root * num_root;
  // exp(16 N th^2 k^2 s2) - V^2 cos^2 written without cancellation:
  const double x = 16.0 * n * theta * theta * k * k * sigma2_ell;
  const double denominator = std::expm1(x) + (1.0 - v2) + v2 * s * s;
  return numerator / denominator;
}

double cfi_analytic(const ProbeConfig& probe, double theta) {
  return cfi_closed_form(probe.n_photons(), probe.wavenumber_k(), probe.visibility(),
                         probe.sigma2_ell(), probe.displacement_d(), theta);
}

double qfi(const ProbeConfig& probe) {
  const double n = probe.n_photons();
  const double k = probe.wavenumber_k();
  const double d = probe.displacement_d();
  return 16.0 * k * k *
         (n * probe.sigma2() + n * n * d * d + n * (n - 1.0) * probe.pairwise_cov());
}

double shot_noise_baseline(const ProbeConfig& probe) {
  const double k = probe.wavenumber_k();
  const double d = probe.displacement_d();
  return probe.n_photons() * 16.0 * k * k * (probe.sigma2() + d * d);
}

double crb_variance(double fisher_value, double repetitions) {
  if (!(repetitions >= 1.0)) throw std::invalid_argument("crb_variance: repetitions >= 1");
  if (fisher_value < 0.0) throw std::invalid_argument("crb_variance: negative Fisher information");
  if (fisher_value == 0.0) throw unbounded_variance_error();
  return 1.0 / (repetitions * fisher_value);
}

FisherReport fisher_report(const ProbeConfig& probe, double theta) {
  FisherReport r;
  r.theta = theta;
  r.cfi = cfi_analytic(probe, theta);
  r.qfi = qfi(probe);
  r.shot_noise_baseline = shot_noise_baseline(probe);
  r.sub_shot_noise = r.cfi > r.shot_noise_baseline;
  if (r.cfi > r.qfi * (1.0 + 1e-9))
    throw std::logic_error("fisher_report: classical information exceeded the quantum bound");
  return r;
}

std::vector<FisherReport> fisher_scan(const ProbeConfig& probe,
                                      std::span<const double> theta_grid, Exec exec) {
  std::vector<FisherReport> out(theta_grid.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(theta_grid.size()), [&](std::ptrdiff_t i) {
    out[static_cast<std::size_t>(i)] =
        fisher_report(probe, theta_grid[static_cast<std::size_t>(i)]);
  });
  return out;
}

namespace {

// Least-squares slope of ln(qfi) against ln(N) over rows [0, count).
double loglog_slope(const std::vector<ScalingRow>& rows, std::size_t count) {
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < count; ++i) {
    sx += std::log(static_cast<double>(rows[i].n));
    sy += std::log(rows[i].qfi);
  }
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = std::log(static_cast<double>(rows[i].n)) - mx;
    const double dy = std::log(rows[i].qfi) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  return sxy / sxx;
}

}  // namespace

ScalingTable scaling_sweep(const ScalingTemplate& tmpl, int n_max) {
  if (n_max < 2) throw std::invalid_argument("scaling_sweep: n_max must be >= 2");
  ScalingTable table;
  table.rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double cov = tmpl.cov_rule == CovRule::max ? tmpl.sigma2 : 0.0;
    const ProbeConfig probe(n, tmpl.k, tmpl.d, tmpl.sigma2, cov, 1.0);
    ScalingRow row;
    row.n = n;
    row.qfi = qfi(probe);
    row.baseline = shot_noise_baseline(probe);
    row.exponent_so_far = std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
    if (n >= 2)
      table.rows.back().exponent_so_far = loglog_slope(table.rows, table.rows.size());
  }
  table.exponent = table.rows.back().exponent_so_far;
  return table;
}

}  // namespace tiltsense
