#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tiltsense/estimate.hpp"
#include "tiltsense/fisher.hpp"
#include "tiltsense/io.hpp"
#include "tiltsense/model.hpp"
#include "tiltsense/oracle.hpp"
#include "tiltsense/units.hpp"
#include "tiltsense/version.hpp"

namespace {

using namespace tiltsense;

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<int> n;
  std::optional<double> lambda_nm;
  std::optional<double> d_mm;
  std::optional<double> sigma2_mm2;
  std::optional<double> cov_mm2;
  std::optional<double> visibility;
  std::optional<double> theta_min_urad;
  std::optional<double> theta_max_urad;
  std::optional<int> points;
  std::optional<std::int64_t> trials;
  std::optional<std::int64_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> count_model;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key=value config file; flags override its entries");
  cmd->add_option("--n", f.n, "photon count N");
  cmd->add_option("--lambda-nm", f.lambda_nm, "wavelength (nm)");
  cmd->add_option("--d-mm", f.d_mm, "beam displacement at the tilt mirror (mm)");
  cmd->add_option("--sigma2-mm2", f.sigma2_mm2, "per-photon transverse variance (mm^2)");
  cmd->add_option("--cov-mm2", f.cov_mm2, "pairwise position covariance (mm^2)");
  cmd->add_option("--visibility", f.visibility, "interferometer visibility in [0, 1]");
  cmd->add_option("--theta-min-urad", f.theta_min_urad, "sweep start (microradians)");
  cmd->add_option("--theta-max-urad", f.theta_max_urad, "sweep end (microradians)");
  cmd->add_option("--points", f.points, "sweep point count");
  cmd->add_option("--trials", f.trials, "shots per point");
  cmd->add_option("--replications", f.replications, "independent repetitions");
  cmd->add_option("--seed", f.seed, "master RNG seed");
  cmd->add_option("--count-model", f.count_model, "exact|binomial|poisson_pair");
  cmd->add_option("--format", f.format, "csv|json|svg (svg also writes the csv)");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
}

RunConfig resolve(const CommonFlags& f) {
  RunConfig cfg;
  if (f.config_path) cfg = load_run_config(*f.config_path);
  if (f.n) cfg.n = *f.n;
  if (f.lambda_nm) cfg.lambda_nm = *f.lambda_nm;
  if (f.d_mm) cfg.d_mm = *f.d_mm;
  if (f.sigma2_mm2) cfg.sigma2_mm2 = *f.sigma2_mm2;
  if (f.cov_mm2) cfg.cov_mm2 = *f.cov_mm2;
  if (f.visibility) cfg.visibility = *f.visibility;
  if (f.theta_min_urad) cfg.theta_min_urad = *f.theta_min_urad;
  if (f.theta_max_urad) cfg.theta_max_urad = *f.theta_max_urad;
  if (f.points) cfg.points = *f.points;
  if (f.trials) cfg.trials = *f.trials;
  if (f.replications) cfg.replications = *f.replications;
  if (f.seed) cfg.seed = *f.seed;
  if (f.count_model) cfg.count_model = parse_count_model(*f.count_model);
  return cfg;
}

std::string resolve_format(const CommonFlags& f, const std::string& default_format,
                           std::initializer_list<std::string_view> allowed) {
  const std::string format = f.format.value_or(default_format);
  for (const auto a : allowed) {
    if (format == a) return format;
  }
  throw std::invalid_argument("format '" + format + "' is not supported by this command");
}

void emit_text(const std::string& content, const std::optional<std::string>& out) {
  if (out)
    atomic_write_file(*out, content);
  else
    std::cout << content;
}

void emit_json(const nlohmann::ordered_json& doc, const std::optional<std::string>& out) {
  emit_text(doc.dump(2) + "\n", out);
}

// --format svg emits both artifacts: the SVG at --out and a CSV sibling (or
// the reverse when --out already names the CSV).
void emit_csv_and_svg(const std::string& csv, const std::string& svg,
                      const std::optional<std::string>& out) {
  if (!out) throw std::invalid_argument("--format svg requires --out");
  namespace fs = std::filesystem;
  const fs::path given(*out);
  fs::path csv_path = fs::path(given).replace_extension(".csv");
  fs::path svg_path = given;
  if (csv_path == given) svg_path = fs::path(given).replace_extension(".svg");
  atomic_write_file(csv_path.string(), csv);
  atomic_write_file(svg_path.string(), svg);
}

void run_scan(const CommonFlags& flags, bool counts) {
  const RunConfig cfg = resolve(flags);
  const std::string format = resolve_format(flags, "csv", {"csv", "json", "svg"});
  const ProbeConfig probe = probe_from(cfg);
  const std::vector<double> grid = theta_grid_from(cfg);
  const FringeCurve curve =
      counts ? synthesize_counts(probe, grid, cfg.trials, cfg.seed, cfg.count_model)
             : fringe_scan(probe, grid);
  const ArtifactMeta meta =
      make_meta(cfg, counts ? "command=scan\ncounts=1\n" : "command=scan\ncounts=0\n");
  if (format == "json")
    emit_json(fringe_json(curve, meta), flags.out);
  else if (format == "svg")
    emit_csv_and_svg(fringe_csv(curve, meta), fringe_svg(curve, meta), flags.out);
  else
    emit_text(fringe_csv(curve, meta), flags.out);
}

void run_fisher(const CommonFlags& flags) {
  const RunConfig cfg = resolve(flags);
  const std::string format = resolve_format(flags, "csv", {"csv", "json", "svg"});
  const ProbeConfig probe = probe_from(cfg);
  const std::vector<double> grid = theta_grid_from(cfg);
  const std::vector<FisherReport> reports = fisher_scan(probe, grid);
  const ArtifactMeta meta = make_meta(cfg, "command=fisher\n");
  if (format == "json")
    emit_json(fisher_json(reports, meta), flags.out);
  else if (format == "svg")
    emit_csv_and_svg(fisher_csv(reports, meta), fisher_svg(reports, meta), flags.out);
  else
    emit_text(fisher_csv(reports, meta), flags.out);
}

void run_qfi(const CommonFlags& flags) {
  const RunConfig cfg = resolve(flags);
  const std::string format = resolve_format(flags, "json", {"json", "csv"});
  const ProbeConfig probe = probe_from(cfg);
  const ArtifactMeta meta = make_meta(cfg, "command=qfi\n");
  if (format == "csv") {
    const double f = qfi(probe);
    const double baseline = shot_noise_baseline(probe);
    std::string csv = header_comment(meta);
    csv += "n,qfi,shot_noise,ratio\n";
    csv += std::to_string(probe.n_photons()) + ',' + format_double(f) + ',' +
           format_double(baseline) + ',' + format_double(f / baseline) + '\n';
    emit_text(csv, flags.out);
  } else {
    emit_json(qfi_json(probe, meta), flags.out);
  }
}

void run_simulate(const CommonFlags& flags, const std::optional<double>& theta_true_urad) {
  const RunConfig cfg = resolve(flags);
  resolve_format(flags, "json", {"json"});
  const ProbeConfig probe = probe_from(cfg);
  double theta_true;
  if (theta_true_urad) {
    theta_true = units::urad_to_rad(*theta_true_urad);
  } else {
    if (probe.displacement_d() == 0.0)
      throw std::invalid_argument(
          "simulate: no default operating point for d = 0; pass --theta-true-urad");
    // Quarter-fringe point, where the fringe slope peaks.
    theta_true = std::numbers::pi /
                 (8.0 * probe.n_photons() * probe.wavenumber_k() *
                  std::abs(probe.displacement_d()));
  }
  const SaturationResult result = saturation_experiment(
      probe, theta_true, cfg.trials, cfg.replications, cfg.seed, cfg.count_model);
  const ArtifactMeta meta =
      make_meta(cfg, "command=simulate\ntheta_true=" + format_double(theta_true) + "\n");
  emit_json(saturation_json(result, meta), flags.out);
}

void run_fit(const CommonFlags& flags, const std::string& input) {
  const RunConfig cfg = resolve(flags);
  resolve_format(flags, "json", {"json"});
  const FringeCurve curve = read_fringe_csv_file(input);
  const FitResult fit =
      fit_fringe(curve, cfg.n, units::wavenumber_from_lambda_nm(cfg.lambda_nm));
  const ArtifactMeta meta = make_meta(cfg, "command=fit\ninput=" + input + "\n");
  emit_json(fit_result_json(fit, meta), flags.out);
}

void run_scaling(const CommonFlags& flags, int n_max, const std::string& cov_rule) {
  const RunConfig cfg = resolve(flags);
  const std::string format = resolve_format(flags, "csv", {"csv", "json"});
  CovRule rule;
  if (cov_rule == "zero")
    rule = CovRule::zero;
  else if (cov_rule == "max")
    rule = CovRule::max;
  else
    throw std::invalid_argument("scaling: --cov-rule must be zero or max");
  ScalingTemplate tmpl;
  tmpl.k = units::wavenumber_from_lambda_nm(cfg.lambda_nm);
  tmpl.sigma2 = units::mm2_to_m2(cfg.sigma2_mm2);
  tmpl.d = units::mm_to_m(cfg.d_mm);
  tmpl.cov_rule = rule;
  const ScalingTable table = scaling_sweep(tmpl, n_max);
  const ArtifactMeta meta = make_meta(
      cfg, "command=scaling\nn_max=" + std::to_string(n_max) + "\ncov_rule=" + cov_rule + "\n");
  if (format == "json")
    emit_json(scaling_json(table, meta), flags.out);
  else
    emit_text(scaling_csv(table, meta), flags.out);
}

void print_error(const std::string& message, int exit_code) {
  nlohmann::ordered_json err{{"error", message}, {"exit", exit_code}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperentangled mirror-tilt sensing: forward model, Fisher information, "
               "Monte Carlo estimation"};
  app.set_version_flag("--version", std::string("tiltsense ") + kVersion);
  app.require_subcommand(1);

  CommonFlags scan_flags;
  bool scan_counts = false;
  CLI::App* scan = app.add_subcommand("scan", "noise-free fringe p(theta) over a theta sweep");
  add_common_flags(scan, scan_flags);
  scan->add_flag("--counts", scan_counts,
                 "emit synthetic counts (trials, seed, count model) instead of probabilities");
  scan->callback([&] { run_scan(scan_flags, scan_counts); });

  CommonFlags fisher_flags;
  CLI::App* fisher_cmd =
      app.add_subcommand("fisher", "classical/quantum Fisher information over a theta sweep");
  add_common_flags(fisher_cmd, fisher_flags);
  fisher_cmd->callback([&] { run_fisher(fisher_flags); });

  CommonFlags qfi_flags;
  CLI::App* qfi_cmd =
      app.add_subcommand("qfi", "quantum Fisher information and shot-noise baseline");
  add_common_flags(qfi_cmd, qfi_flags);
  qfi_cmd->callback([&] { run_qfi(qfi_flags); });

  CommonFlags sim_flags;
  std::optional<double> theta_true_urad;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Cramer-Rao saturation run at a fixed operating point");
  add_common_flags(simulate, sim_flags);
  simulate->add_option("--theta-true-urad", theta_true_urad,
                       "operating point (default: the quarter-fringe angle)");
  simulate->callback([&] { run_simulate(sim_flags, theta_true_urad); });

  CommonFlags fit_flags;
  std::string fit_input;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit (V, sigma_ell^2, d) to a fringe CSV");
  add_common_flags(fit_cmd, fit_flags);
  fit_cmd->add_option("input", fit_input, "fringe CSV path")->required();
  fit_cmd->callback([&] { run_fit(fit_flags, fit_input); });

  CommonFlags scaling_flags;
  int n_max = 10;
  std::string cov_rule = "max";
  CLI::App* scaling = app.add_subcommand("scaling", "QFI vs photon count N sweep");
  add_common_flags(scaling, scaling_flags);
  scaling->add_option("--n-max", n_max, "largest N (>= 2)");
  scaling->add_option("--cov-rule", cov_rule, "zero|max covariance rule");
  scaling->callback([&] { run_scaling(scaling_flags, n_max, cov_rule); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    print_error(e.what(), kExitUsage);
    return kExitUsage;
  } catch (const unbounded_variance_error& e) {
    print_error(e.what(), kExitNumeric);
    return kExitNumeric;
  } catch (const resolution_error& e) {
    print_error(e.what(), kExitNumeric);
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    print_error(e.what(), kExitNumeric);
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    print_error(e.what(), kExitUsage);
    return kExitUsage;
  } catch (const std::logic_error& e) {
    print_error(e.what(), kExitUsage);
    return kExitUsage;
  } catch (const std::exception& e) {
    print_error(e.what(), kExitNumeric);
    return kExitNumeric;
  }
}
