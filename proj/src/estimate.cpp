#include "tiltsense/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tiltsense/fisher.hpp"
#include "tiltsense/model.hpp"
#include "tiltsense/rng.hpp"

namespace tiltsense {

FringeCurve synthesize_counts(const ProbeConfig& probe, std::span<const double> theta_grid,
                              std::int64_t trials_per_point, std::uint64_t seed,
                              CountModel count_model, Exec exec) {
  if (theta_grid.empty()) throw std::invalid_argument("synthesize_counts: empty theta grid");
  if (trials_per_point < 1)
    throw std::invalid_argument("synthesize_counts: trials_per_point must be >= 1");

  FringeCurve curve;
  curve.count_model = count_model;
  curve.records.resize(theta_grid.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(theta_grid.size()), [&](std::ptrdiff_t i) {
    const double theta = theta_grid[static_cast<std::size_t>(i)];
    const double p = projection_probability(probe, theta);
    FringeRecord rec;
    rec.theta = theta;
    switch (count_model) {
      case CountModel::exact:
        rec.probability = p;
        break;
      case CountModel::binomial: {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        rec.trials = trials_per_point;
        rec.successes = rng.binomial(trials_per_point, p);
        break;
      }
      case CountModel::poisson_pair: {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        std::int64_t total = 0;
        do {
          total = rng.poisson(static_cast<double>(trials_per_point));
        } while (total == 0);
        rec.trials = total;
        rec.successes = rng.binomial(total, p);
        break;
      }
    }
    curve.records[static_cast<std::size_t>(i)] = rec;
  });
  curve.validate();
  return curve;
}

namespace {

// Locates the stationary point of p between theta_inside (where dp/dtheta has
// the reference sign) and theta_outside (sign flipped or zero) by bisection
// on the derivative sign.
double refine_stationary(const ProbeConfig& probe, double theta_inside, double theta_outside,
                         bool reference_positive) {
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (theta_inside + theta_outside);
    if (mid == theta_inside || mid == theta_outside) break;
    const double g = projection_probability_derivative(probe, mid);
    if (g != 0.0 && (g > 0.0) == reference_positive)
      theta_inside = mid;
    else
      theta_outside = mid;
  }
  return theta_inside;
}

// Walks from theta0 in steps of `step` (signed) until dp/dtheta flips sign or
// vanishes, then refines the crossing.
double scan_for_stationary(const ProbeConfig& probe, double theta0, double step,
                           bool reference_positive) {
  double prev = theta0;
  constexpr int kMaxSteps = 200000;
  for (int i = 1; i <= kMaxSteps; ++i) {
    const double next = theta0 + step * i;
    const double g = projection_probability_derivative(probe, next);
    if (g == 0.0 || (g > 0.0) != reference_positive)
      return refine_stationary(probe, prev, next, reference_positive);
    prev = next;
  }
  throw std::runtime_error("branch_around: no stationary point found within the scan range");
}

}  // namespace

Branch branch_around(const ProbeConfig& probe, double theta0) {
  const double g0 = projection_probability_derivative(probe, theta0);
  if (g0 == 0.0)
    throw std::invalid_argument(
        "branch_around: theta0 is a stationary point of p(theta); no monotonic branch "
        "contains it in its interior");
  const bool positive = g0 > 0.0;

  const double k = probe.wavenumber_k();
  double step;
  if (probe.displacement_d() != 0.0) {
    // Fringe extrema sit roughly half a period apart.
    const double period =
        2.0 * std::numbers::pi / (4.0 * probe.n_photons() * k * std::abs(probe.displacement_d()));
    step = period / 32.0;
  } else {
    // Envelope-only decay: the sole interior stationary point is theta = 0;
    // the far edge is where the envelope underflows and p' rounds to zero.
    step = 1.0 / (8.0 * k * std::sqrt(8.0 * probe.sum_variance()));
  }

  Branch branch;
  branch.theta_lo = scan_for_stationary(probe, theta0, -step, positive);
  branch.theta_hi = scan_for_stationary(probe, theta0, step, positive);
  branch.p_lo = projection_probability(probe, branch.theta_lo);
  branch.p_hi = projection_probability(probe, branch.theta_hi);
  return branch;
}

MleResult mle_theta(double p_hat, const ProbeConfig& probe, const Branch& branch) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0))
    throw std::invalid_argument("mle_theta: p_hat outside [0, 1]");
  if (!(branch.theta_hi > branch.theta_lo))
    throw std::invalid_argument("mle_theta: branch is empty");
  if (branch.p_lo == branch.p_hi)
    throw std::invalid_argument("mle_theta: flat branch (dp/dtheta = 0 throughout)");

  MleResult out;
  out.p_hat = p_hat;
  const bool inc = branch.increasing();
  const double p_min = inc ? branch.p_lo : branch.p_hi;
  const double p_max = inc ? branch.p_hi : branch.p_lo;
  if (p_hat <= p_min) {
    out.theta_hat = inc ? branch.theta_lo : branch.theta_hi;
    out.clipped = p_hat < p_min;
    return out;
  }
  if (p_hat >= p_max) {
    out.theta_hat = inc ? branch.theta_hi : branch.theta_lo;
    out.clipped = p_hat > p_max;
    return out;
  }

  double lo = branch.theta_lo;
  double hi = branch.theta_hi;
  const double tol = 1e-12 * branch.width();
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = projection_probability(probe, mid);
    if ((pm < p_hat) == inc)
      lo = mid;
    else
      hi = mid;
  }
  out.theta_hat = 0.5 * (lo + hi);
  return out;
}

MleResult mle_theta(const FringeRecord& point, const ProbeConfig& probe, const Branch& branch) {
  double p_hat;
  if (point.successes && point.trials) {
    if (*point.trials < 1 || *point.successes < 0 || *point.successes > *point.trials)
      throw std::invalid_argument("mle_theta: need 0 <= successes <= trials, trials >= 1");
    p_hat = static_cast<double>(*point.successes) / static_cast<double>(*point.trials);
  } else if (point.probability) {
    p_hat = *point.probability;
  } else {
    throw std::invalid_argument("mle_theta: record carries neither counts nor a probability");
  }
  return mle_theta(p_hat, probe, branch);
}

namespace {

struct FitData {
  std::vector<double> theta;
  std::vector<double> y;
  std::vector<double> sqrt_w;
  int n = 0;
  double k = 0.0;
  bool counted = false;  // weights derived from per-point counts
};

double fringe_model(int n, double k, double V, double s2, double d, double theta,
                    double* dV, double* ds2, double* dd) {
  const double phi = 4.0 * n * k * theta * d;
  const double env = std::exp(-8.0 * n * k * k * theta * theta * s2);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  if (dV) *dV = 0.5 * c * env;
  if (ds2) *ds2 = -4.0 * n * k * k * theta * theta * V * c * env;
  if (dd) *dd = -2.0 * n * k * theta * V * s * env;
  return 0.5 * (1.0 + V * c * env);
}

struct InitGuess {
  double V = 0.0;
  double s2 = 0.0;
  double d = 0.0;
  double peak_cycles_per_span = 0.0;  // dominant frequency x theta span
};

InitGuess initialize(const FitData& data) {
  const std::size_t m = data.theta.size();
  double ymin = data.y[0], ymax = data.y[0], ysum = 0.0;
  for (double v : data.y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
    ysum += v;
  }
  const double ymean = ysum / static_cast<double>(m);

  InitGuess guess;
  guess.V = std::clamp(ymax - ymin, 1e-3, 1.0);

  // Dominant non-DC frequency of the mean-removed data over a 4x zero-padded
  // comb up to the uniform-grid Nyquist; ascending scan with strict > keeps
  // ties on the lower frequency.
  const double span = data.theta.back() - data.theta.front();
  const std::size_t bins = 2 * (m - 1);
  double best_power = 0.0;
  std::size_t best_bin = 0;
  for (std::size_t j = 1; j <= bins; ++j) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(j) / (4.0 * span);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double arg = omega * data.theta[i];
      const double q = data.y[i] - ymean;
      re += q * std::cos(arg);
      im -= q * std::sin(arg);
    }
    const double power = re * re + im * im;
    if (power > best_power) {
      best_power = power;
      best_bin = j;
    }
  }
  const double f_star = static_cast<double>(best_bin) / (4.0 * span);  // cycles per radian
  guess.peak_cycles_per_span = f_star * span;
  guess.d = std::numbers::pi * f_star / (2.0 * data.n * data.k);

  // Log-envelope regression ln|y - 1/2| ~ a - 8 N k^2 s2 theta^2 over points
  // clear of the fringe zero crossings.
  const double amp_floor = 0.05 * std::max(ymax - ymin, 1e-12) / 2.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double amp = std::abs(data.y[i] - 0.5);
    if (amp < amp_floor) continue;
    const double x = data.theta[i] * data.theta[i];
    const double ly = std::log(amp);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
    ++cnt;
  }
  const double theta_half = std::max(std::abs(data.theta.front()), std::abs(data.theta.back()));
  const double fallback = 1.0 / (8.0 * data.n * data.k * data.k *
                                 std::max(theta_half * theta_half, 1e-300));
  double s2 = fallback;
  if (cnt >= 3) {
    const double denom = cnt * sxx - sx * sx;
    if (denom > 0.0) {
      const double slope = (cnt * sxy - sx * sy) / denom;
      if (slope < 0.0) s2 = -slope / (8.0 * data.n * data.k * data.k);
    }
  }
  guess.s2 = std::clamp(s2, fallback * 1e-9, fallback * 1e6);
  return guess;
}

struct LmState {
  Eigen::VectorXd beta;  // (V, s2) or (V, s2, d)
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

double lm_evaluate(const FitData& data, const Eigen::VectorXd& beta, bool fit_d,
                   Eigen::VectorXd* r, Eigen::MatrixXd* J) {
  const auto m = static_cast<Eigen::Index>(data.theta.size());
  const double V = beta[0];
  const double s2 = beta[1];
  const double d = fit_d ? beta[2] : 0.0;
  double rss = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double dV, ds2, dd;
    const double f = fringe_model(data.n, data.k, V, s2, d,
                                  data.theta[static_cast<std::size_t>(i)], &dV, &ds2, &dd);
    const double sw = data.sqrt_w[static_cast<std::size_t>(i)];
    const double res = sw * (data.y[static_cast<std::size_t>(i)] - f);
    rss += res * res;
    if (r) (*r)[i] = res;
    if (J) {
      (*J)(i, 0) = sw * dV;
      (*J)(i, 1) = sw * ds2;
      if (fit_d) (*J)(i, 2) = sw * dd;
    }
  }
  return rss;
}

void clamp_active(Eigen::VectorXd& beta, double s2_floor) {
  beta[0] = std::clamp(beta[0], 0.0, 1.0);
  beta[1] = std::max(beta[1], s2_floor);
}

// Levenberg-Marquardt with multiplicative diag(J^T J) damping.  Accepted
// steps never increase the objective; convergence is declared when the
// residual is orthogonal to every Jacobian column to 1e-10 relative, or an
// accepted step stalls at the machine-precision floor.
LmState run_lm(const FitData& data, Eigen::VectorXd beta0, bool fit_d, double s2_floor) {
  const int np = fit_d ? 3 : 2;
  const auto m = static_cast<Eigen::Index>(data.theta.size());
  LmState st;
  clamp_active(beta0, s2_floor);
  st.beta = std::move(beta0);
  Eigen::VectorXd r(m);
  Eigen::MatrixXd J(m, np);
  st.rss = lm_evaluate(data, st.beta, fit_d, &r, &J);
  st.trace.push_back(st.rss);
  const double rss0 = st.rss;
  double lambda = 1e-3;
  constexpr int kMaxIterations = 200;
  const auto orthogonal_to = [&](double tol) {
    const Eigen::VectorXd g = J.transpose() * r;
    const double rn = r.norm();
    for (int j = 0; j < np; ++j) {
      if (std::abs(g[j]) > tol * J.col(j).norm() * rn + 1e-300) return false;
    }
    return true;
  };
  while (st.iterations < kMaxIterations) {
    ++st.iterations;
    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (orthogonal_to(1e-10)) {
      st.converged = true;
      break;
    }
    Eigen::MatrixXd damped = jtj;
    for (int j = 0; j < np; ++j) damped(j, j) += lambda * std::max(jtj(j, j), 1e-300);
    const Eigen::VectorXd step = damped.ldlt().solve(g);
    Eigen::VectorXd candidate = st.beta + step;
    clamp_active(candidate, s2_floor);
    const double rss_new = lm_evaluate(data, candidate, fit_d, nullptr, nullptr);
    if (rss_new <= st.rss) {
      const double drop = st.rss - rss_new;
      st.beta = std::move(candidate);
      st.rss = lm_evaluate(data, st.beta, fit_d, &r, &J);
      st.trace.push_back(st.rss);
      lambda = std::max(lambda / 3.0, 1e-12);
      if ((lambda < 1.0 && drop <= 1e-14 * (st.rss + 1e-300)) ||
          st.rss <= 1e-30 * (rss0 + 1e-300)) {
        st.converged = true;
        break;
      }
    } else {
      lambda *= 4.0;
      if (lambda > 1e14) break;  // no acceptable step; report best-so-far
    }
  }
  // Once the remaining decrease is below the objective's rounding noise the
  // loop can neither accept a step nor hit the tight test above; a gradient
  // orthogonal to 1e-6 still certifies a minimum (stall floor is ~sqrt(eps)).
  if (!st.converged) st.converged = orthogonal_to(1e-6);
  return st;
}

}  // namespace

FitResult fit_fringe(const FringeCurve& curve, int n_photons, double wavenumber_k) {
  curve.validate();
  if (n_photons < 1) throw std::invalid_argument("fit_fringe: n_photons must be >= 1");
  if (!(wavenumber_k > 0.0))
    throw std::invalid_argument("fit_fringe: wavenumber must be positive");
  const std::size_t m = curve.records.size();
  if (m < 8) throw std::invalid_argument("fit_fringe: need at least 8 points");

  FitData data;
  data.n = n_photons;
  data.k = wavenumber_k;
  data.theta.resize(m);
  data.y.resize(m);
  data.sqrt_w.resize(m);
  data.counted = std::all_of(curve.records.begin(), curve.records.end(), [](const FringeRecord& r) {
    return r.successes && r.trials;
  });
  for (std::size_t i = 0; i < m; ++i) {
    data.theta[i] = curve.records[i].theta;
    data.y[i] = curve.probability_at(i);
    if (data.counted) {
      const double t = static_cast<double>(*curve.records[i].trials);
      const double var = std::max(data.y[i] * (1.0 - data.y[i]) / t, 1.0 / (4.0 * t * t));
      data.sqrt_w[i] = 1.0 / std::sqrt(var);
    } else {
      data.sqrt_w[i] = 1.0;
    }
  }

  const InitGuess init = initialize(data);
  const double s2_floor = 1e-12 * init.s2;

  Eigen::VectorXd b3(3);
  b3 << init.V, init.s2, init.d;
  LmState best = run_lm(data, b3, true, s2_floor);
  bool fixed_zero = false;

  // A displacement whose fringe never completes 3/4 of a cycle across the
  // grid is indistinguishable from d = 0 with a wider envelope (a pure
  // envelope also aliases to a ~1.25-cycle frequency peak, so the peak alone
  // cannot rule d = 0 out).  Whenever the peak, the fitted d, or a stuck
  // free fit leaves that regime open, fit the two-parameter branch too and
  // keep the lower residual; ties go to fewer parameters.
  const double theta_reach =
      std::max(std::abs(data.theta.front()), std::abs(data.theta.back()));
  const double fitted_cycles = 2.0 * data.n * data.k * theta_reach *
                               std::abs(best.beta[2]) / std::numbers::pi;
  if (init.peak_cycles_per_span < 0.75 || fitted_cycles < 0.75 || !best.converged) {
    Eigen::VectorXd b2(2);
    b2 << init.V, init.s2;
    LmState fixed = run_lm(data, b2, false, s2_floor);
    if (fixed.rss <= best.rss * (1.0 + 1e-9)) {
      best = std::move(fixed);
      fixed_zero = true;
    }
  }

  const bool fit_d = !fixed_zero;
  if (fit_d && best.beta[2] < 0.0) best.beta[2] = -best.beta[2];  // p is even in d

  const int np = fit_d ? 3 : 2;
  Eigen::VectorXd r(static_cast<Eigen::Index>(m));
  Eigen::MatrixXd J(static_cast<Eigen::Index>(m), np);
  const double rss = lm_evaluate(data, best.beta, fit_d, &r, &J);
  Eigen::MatrixXd cov =
      (J.transpose() * J).completeOrthogonalDecomposition().pseudoInverse();
  if (!data.counted) cov *= rss / std::max(static_cast<double>(m) - np, 1.0);

  FitResult out;
  out.visibility_hat = best.beta[0];
  out.sigma2_ell_hat = best.beta[1];
  out.d_hat = fit_d ? best.beta[2] : 0.0;
  out.residual_sum_squares = rss;
  out.parameter_covariance.setZero();
  out.parameter_covariance.topLeftCorner(np, np) = cov;
  for (int j = 0; j < 3; ++j)
    out.parameter_errors[static_cast<std::size_t>(j)] =
        std::sqrt(std::max(out.parameter_covariance(j, j), 0.0));
  out.n_photons = n_photons;
  out.wavenumber_k = wavenumber_k;
  out.converged = best.converged;
  out.iterations = best.iterations;
  out.d_fixed_to_zero = fixed_zero;
  out.objective_trace = std::move(best.trace);
  return out;
}

namespace {

// dF/d(param j) by finite differences, staying inside [lo, hi].
double cfi_param_derivative(int n, double k, std::array<double, 3> b, int j, double h,
                            double lo, double hi, double theta) {
  auto eval = [&](double value) {
    std::array<double, 3> q = b;
    q[static_cast<std::size_t>(j)] = value;
    return cfi_closed_form(n, k, q[0], q[1], q[2], theta);
  };
  const double bj = b[static_cast<std::size_t>(j)];
  const double up = bj + h;
  const double dn = bj - h;
  if (up <= hi && dn >= lo) return (eval(up) - eval(dn)) / (2.0 * h);
  if (up <= hi) return (eval(up) - eval(bj)) / h;
  if (dn >= lo) return (eval(bj) - eval(dn)) / h;
  return 0.0;
}

}  // namespace

std::vector<FitFisherRow> fisher_report_from_fit(const FitResult& fit,
                                                 std::span<const double> theta_grid,
                                                 double band_sigmas) {
  if (fit.n_photons < 1 || !(fit.wavenumber_k > 0.0))
    throw std::invalid_argument("fisher_report_from_fit: fit carries no probe context");
  if (!(band_sigmas >= 0.0))
    throw std::invalid_argument("fisher_report_from_fit: band_sigmas must be >= 0");

  const int n = fit.n_photons;
  const double k = fit.wavenumber_k;
  const std::array<double, 3> b{fit.visibility_hat, fit.sigma2_ell_hat, fit.d_hat};
  const std::array<double, 3> lo{0.0, 0.0, 0.0};
  const std::array<double, 3> hi{1.0, std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity()};

  std::vector<FitFisherRow> rows;
  rows.reserve(theta_grid.size());
  for (const double theta : theta_grid) {
    FitFisherRow row;
    row.theta = theta;
    row.cfi = cfi_closed_form(n, k, b[0], b[1], b[2], theta);
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) {
      const double h = std::max(1e-6 * std::abs(b[static_cast<std::size_t>(j)]),
                                1e-4 * fit.parameter_errors[static_cast<std::size_t>(j)]);
      if (h == 0.0) continue;  // parameter pinned (e.g. d fixed at 0 with zero error)
      grad[j] = cfi_param_derivative(n, k, b, j, h, lo[static_cast<std::size_t>(j)],
                                     hi[static_cast<std::size_t>(j)], theta);
    }
    const double var = grad.dot(fit.parameter_covariance * grad);
    const double band = band_sigmas * std::sqrt(std::max(var, 0.0));
    row.cfi_lower = std::max(row.cfi - band, 0.0);
    row.cfi_upper = row.cfi + band;
    rows.push_back(row);
  }
  return rows;
}

SaturationResult saturation_experiment(const ProbeConfig& probe, double theta_true,
                                       std::int64_t trials, std::int64_t replications,
                                       std::uint64_t seed, CountModel count_model, Exec exec) {
  if (trials < 1) throw std::invalid_argument("saturation_experiment: trials must be >= 1");
  if (replications < 1)
    throw std::invalid_argument("saturation_experiment: replications must be >= 1");

  const double fisher = cfi_analytic(probe, theta_true);
  const double crb = crb_variance(fisher, static_cast<double>(trials));
  const Branch branch = branch_around(probe, theta_true);
  const double p_true = projection_probability(probe, theta_true);

  std::vector<double> theta_hats(static_cast<std::size_t>(replications));
  std::vector<char> clipped(static_cast<std::size_t>(replications), 0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(replications), [&](std::ptrdiff_t rep) {
    double p_hat = p_true;
    if (count_model != CountModel::exact) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rep));
      std::int64_t t = trials;
      if (count_model == CountModel::poisson_pair) {
        do {
          t = rng.poisson(static_cast<double>(trials));
        } while (t == 0);
      }
      const std::int64_t s = rng.binomial(t, p_true);
      p_hat = static_cast<double>(s) / static_cast<double>(t);
    }
    const MleResult mle = mle_theta(p_hat, probe, branch);
    theta_hats[static_cast<std::size_t>(rep)] = mle.theta_hat;
    clipped[static_cast<std::size_t>(rep)] = mle.clipped ? 1 : 0;
  });

  SaturationResult out;
  out.theta_true = theta_true;
  out.replications = replications;
  out.trials = trials;
  out.seed = seed;
  double sum = 0.0;
  for (const double th : theta_hats) sum += th;
  out.theta_hat_mean = sum / static_cast<double>(replications);
  double sse = 0.0;
  for (std::size_t i = 0; i < theta_hats.size(); ++i) {
    const double err = theta_hats[i] - theta_true;
    sse += err * err;
    out.clipped_replications += clipped[i];
  }
  out.empirical_mse = sse / static_cast<double>(replications);
  out.crb = crb;
  out.ratio = out.empirical_mse / crb;
  return out;
}

}  // namespace tiltsense
