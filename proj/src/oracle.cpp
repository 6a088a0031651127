#include "tiltsense/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tiltsense/fisher.hpp"
#include "tiltsense/model.hpp"
#include "tiltsense/rng.hpp"

namespace tiltsense {

namespace {

constexpr double kDegenerateCorrelation = 1.0 - 1e-12;
constexpr int kMcShards = 256;

void check_resolution(double omega, double step) {
  if (omega == 0.0) return;
  const double period = 2.0 * std::numbers::pi / std::abs(omega);
  if (period < 8.0 * step)
    throw resolution_error("quadrature: integrand period below 8 grid steps; "
                           "increase points_per_axis or reduce |theta|");
}

// Trapezoid weights folded into the (unnormalized) density values.
struct Table1D {
  std::vector<double> x;
  std::vector<double> density;  // weighted
  double mass = 0.0;
  double step = 0.0;
};

Table1D build_1d(double mean, double variance, const GridSpec& grid) {
  const int n = grid.resolved_points(1);
  const double sigma = std::sqrt(variance);
  const double lo = mean - grid.half_width_sigmas * sigma;
  const double hi = mean + grid.half_width_sigmas * sigma;
  Table1D t;
  t.step = (hi - lo) / (n - 1);
  t.x.resize(n);
  t.density.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = lo + t.step * i;
    const double u = (x - mean) / sigma;
    double w = std::exp(-0.5 * u * u);
    if (i == 0 || i == n - 1) w *= 0.5;
    t.x[i] = x;
    t.density[i] = w;
    t.mass += w;
  }
  return t;
}

// Normalized cosine integral  int rho(x) cos(omega x) dx / int rho(x) dx.
double cosine_integral_1d(const Table1D& t, double omega) {
  check_resolution(omega, t.step);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i)
    acc += t.density[i] * std::cos(omega * t.x[i]);
  return acc / t.mass;
}

// Full-rank bivariate table: weighted density and x1 + x2 per node.
struct Table2D {
  std::vector<double> sum_x;    // x1 + x2, row-major
  std::vector<double> density;  // weighted
  double mass = 0.0;
  double step = 0.0;
};

Table2D build_2d(double mean, double sigma2, double cov, const GridSpec& grid) {
  const int n = grid.resolved_points(2);
  const double sigma = std::sqrt(sigma2);
  const double lo = mean - grid.half_width_sigmas * sigma;
  const double hi = mean + grid.half_width_sigmas * sigma;
  const double det = sigma2 * sigma2 - cov * cov;
  // Sigma^{-1} = [[a, b], [b, a]] for the exchange-symmetric pair.
  const double a = sigma2 / det;
  const double b = -cov / det;

  Table2D t;
  t.step = (hi - lo) / (n - 1);
  t.sum_x.resize(static_cast<std::size_t>(n) * n);
  t.density.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double x1 = lo + t.step * i;
    const double u1 = x1 - mean;
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double x2 = lo + t.step * j;
      const double u2 = x2 - mean;
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      const double q = a * (u1 * u1 + u2 * u2) + 2.0 * b * u1 * u2;
      const double w = wi * wj * std::exp(-0.5 * q);
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      t.sum_x[idx] = x1 + x2;
      t.density[idx] = w;
      t.mass += w;
    }
  }
  return t;
}

double cosine_integral_2d(const Table2D& t, double omega) {
  check_resolution(omega, t.step);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.density.size(); ++i)
    acc += t.density[i] * std::cos(omega * t.sum_x[i]);
  return acc / t.mass;
}

// Shared evaluation path: tables built per (probe, grid), then each theta is
// a density-weighted cosine sum.  The oscillatory part of the coherence is
// scaled by the scalar visibility.
struct Workspace {
  enum class Mode { one_photon, pair_full_rank, pair_rank_one, pair_anti } mode;
  Table1D t1;
  Table2D t2;
  double constant_phase_rate = 0.0;  // pair_anti: x1 + x2 == 2 d exactly
};

Workspace build_workspace(const ProbeConfig& probe, const GridSpec& grid) {
  grid.validate();
  Workspace ws;
  if (probe.n_photons() == 1) {
    ws.mode = Workspace::Mode::one_photon;
    ws.t1 = build_1d(probe.displacement_d(), probe.sigma2(), grid);
    return ws;
  }
  if (probe.n_photons() != 2)
    throw std::invalid_argument(
        "quadrature_probability: only N = 1 and N = 2 are supported; use the "
        "Monte Carlo generator-variance oracle for larger N");
  const double corr = probe.pairwise_cov() / probe.sigma2();
  if (corr >= kDegenerateCorrelation) {
    // x2 tracks x1 exactly: integrate over the 1D support.
    ws.mode = Workspace::Mode::pair_rank_one;
    ws.t1 = build_1d(probe.displacement_d(), probe.sigma2(), grid);
  } else if (corr <= -kDegenerateCorrelation) {
    // x2 mirrors x1 about d: x1 + x2 is the constant 2 d.
    ws.mode = Workspace::Mode::pair_anti;
    ws.constant_phase_rate = 2.0 * probe.displacement_d();
  } else {
    ws.mode = Workspace::Mode::pair_full_rank;
    ws.t2 = build_2d(probe.displacement_d(), probe.sigma2(), probe.pairwise_cov(), grid);
  }
  return ws;
}

double evaluate(const Workspace& ws, const ProbeConfig& probe, double theta) {
  const double omega = 4.0 * probe.wavenumber_k() * theta;
  double oscillatory = 0.0;
  switch (ws.mode) {
    case Workspace::Mode::one_photon:
      oscillatory = cosine_integral_1d(ws.t1, omega);
      break;
    case Workspace::Mode::pair_full_rank:
      oscillatory = cosine_integral_2d(ws.t2, omega);
      break;
    case Workspace::Mode::pair_rank_one:
      oscillatory = cosine_integral_1d(ws.t1, 2.0 * omega);
      break;
    case Workspace::Mode::pair_anti:
      oscillatory = std::cos(omega * ws.constant_phase_rate);
      break;
  }
  return 0.5 * (1.0 + probe.visibility() * oscillatory);
}

}  // namespace

int GridSpec::resolved_points(int dimensions) const {
  if (points_per_axis != 0) return points_per_axis;
  return dimensions == 1 ? 4096 : 512;
}

void GridSpec::validate() const {
  if (!(half_width_sigmas >= 6.0))
    throw std::invalid_argument("grid: half width must cover at least 6 sigma");
  if (points_per_axis != 0 && points_per_axis < 64)
    throw std::invalid_argument("grid: need at least 64 points per axis");
}

double quadrature_probability(const ProbeConfig& probe, double theta, const GridSpec& grid) {
  const Workspace ws = build_workspace(probe, grid);
  return evaluate(ws, probe, theta);
}

std::vector<double> quadrature_scan(const ProbeConfig& probe,
                                    std::span<const double> theta_grid,
                                    const GridSpec& grid, Exec exec) {
  if (theta_grid.empty()) throw std::invalid_argument("quadrature_scan: empty grid");
  const Workspace ws = build_workspace(probe, grid);
  // Resolution is monotone in |theta|; checking the extremes up front turns a
  // mid-scan failure into an immediate one.
  for (double theta : {theta_grid.front(), theta_grid.back()}) (void)evaluate(ws, probe, theta);

  std::vector<double> out(theta_grid.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(theta_grid.size()), [&](std::ptrdiff_t i) {
    out[static_cast<std::size_t>(i)] =
        evaluate(ws, probe, theta_grid[static_cast<std::size_t>(i)]);
  });
  return out;
}

FdCfi finite_difference_cfi(const ProbeConfig& probe, double theta, double step) {
  if (step <= 0.0) {
    const double sigma_ell = std::sqrt(probe.sigma2_ell());
    const double k = probe.wavenumber_k();
    const double rate = 4.0 * probe.n_photons() * k * std::abs(probe.displacement_d()) +
                        4.0 * k * sigma_ell;
    step = std::max(1e-9, 1e-4 / rate);
  }
  FdCfi result;
  result.step = step;
  result.delta_p = projection_probability(probe, theta + step) -
                   projection_probability(probe, theta - step);
  result.cancellation =
      std::abs(result.delta_p) < 64.0 * std::numeric_limits<double>::epsilon();
  const double dp_dtheta = result.delta_p / (2.0 * step);
  result.cfi = cfi_binary_clamped(projection_probability(probe, theta), dp_dtheta);
  return result;
}

McEstimate mc_generator_variance_qfi(const ProbeConfig& probe, std::int64_t samples,
                                     std::uint64_t seed, Exec exec) {
  if (samples < 10000)
    throw std::invalid_argument("mc qfi: need at least 1e4 samples");

  const int n = probe.n_photons();
  const double k = probe.wavenumber_k();
  const double d = probe.displacement_d();
  const double cov = probe.pairwise_cov();
  // Square root of the uniform-correlation covariance:
  //   A = beta I + ((alpha - beta)/N) J,
  // alpha^2 = sigma^2 + (N-1) Cov (the 1-direction), beta^2 = sigma^2 - Cov.
  const double alpha2 = probe.sigma2() + (n - 1) * cov;
  const double beta2 = probe.sigma2() - cov;
  const double psd_slack = 1e-12 * probe.sigma2();
  if (alpha2 < -psd_slack || beta2 < -psd_slack)
    throw std::invalid_argument("mc qfi: covariance is not positive semidefinite");
  const double alpha = std::sqrt(std::max(alpha2, 0.0));
  const double beta = std::sqrt(std::max(beta2, 0.0));

  struct ShardSums {
    double h1 = 0, h2 = 0, h3 = 0, h4 = 0;
  };
  std::vector<ShardSums> sums(kMcShards);
  const std::int64_t base = samples / kMcShards;
  const std::int64_t rem = samples % kMcShards;

  for_each_index(exec, kMcShards, [&](std::ptrdiff_t shard) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(shard));
    const std::int64_t count = base + (shard < rem ? 1 : 0);
    std::vector<double> zs(static_cast<std::size_t>(n));
    ShardSums local;
    for (std::int64_t s = 0; s < count; ++s) {
      const double sign = (rng.next_u64() >> 63) ? 1.0 : -1.0;  // GHZ branch
      double zsum = 0.0;
      for (auto& v : zs) {
        v = rng.normal();
        zsum += v;
      }
      double xsum = 0.0;
      const double shared = (alpha - beta) / n * zsum;
      for (const double v : zs) xsum += d + beta * v + shared;
      const double h = 2.0 * k * sign * xsum;
      const double h2 = h * h;
      local.h1 += h;
      local.h2 += h2;
      local.h3 += h2 * h;
      local.h4 += h2 * h2;
    }
    sums[static_cast<std::size_t>(shard)] = local;
  });

  // Fixed-order merge keeps the result identical for any worker count.
  ShardSums total;
  for (const auto& sh : sums) {
    total.h1 += sh.h1;
    total.h2 += sh.h2;
    total.h3 += sh.h3;
    total.h4 += sh.h4;
  }
  const double fn = static_cast<double>(samples);
  const double mean = total.h1 / fn;
  const double m2 = total.h2 / fn - mean * mean;
  const double m4 = total.h4 / fn - 4.0 * mean * total.h3 / fn +
                    6.0 * mean * mean * total.h2 / fn - 3.0 * mean * mean * mean * mean;
  const double variance = m2 * fn / (fn - 1.0);

  McEstimate est;
  est.value = 4.0 * variance;
  est.std_error = 4.0 * std::sqrt(std::max(m4 - m2 * m2, 0.0) / fn);
  est.seed = seed;
  est.samples = samples;
  return est;
}

}  // namespace tiltsense
