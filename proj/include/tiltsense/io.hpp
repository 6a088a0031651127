#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tiltsense/estimate.hpp"
#include "tiltsense/fisher.hpp"
#include "tiltsense/fringe.hpp"
#include "tiltsense/probe.hpp"

namespace tiltsense {

/// One run's full user-facing configuration, in the units the CLI speaks
/// (nm, mm, mm^2, microradians).  SI appears only past probe_from /
/// theta_grid_from.
struct RunConfig {
  int n = 2;
  double lambda_nm = 650.0;
  double d_mm = 0.0;
  double sigma2_mm2 = 0.70;
  double cov_mm2 = 0.0;
  double visibility = 1.0;
  double theta_min_urad = -50.0;
  double theta_max_urad = 50.0;
  int points = 201;
  std::int64_t trials = 10000;
  std::int64_t replications = 1000;
  std::uint64_t seed = 1;
  CountModel count_model = CountModel::binomial;
};

/// key=value lines; blank lines and lines starting with '#' are skipped.
/// Error messages carry 1-based line numbers.
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Sets one documented key (n, lambda_nm, d_mm, sigma2_mm2, cov_mm2,
/// visibility, theta_min_urad, theta_max_urad, points, trials, replications,
/// seed, count_model).  Unknown keys and unparseable values throw.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Defaults overlaid with every entry of the file.
RunConfig load_run_config(const std::string& path);

CountModel parse_count_model(const std::string& name);
std::string count_model_name(CountModel model);

/// SI probe from user units: k = 2 pi / (lambda_nm 1e-9), mm -> m, mm^2 -> m^2.
ProbeConfig probe_from(const RunConfig& config);

/// Radian grid from the microradian sweep spec.  points == 1 takes the lower
/// bound; otherwise theta_min < theta_max is required.
std::vector<double> theta_grid_from(const RunConfig& config);

/// Shortest decimal form that parses back to the same double (std::to_chars).
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a hash of the canonical key=value serialization of the config plus
/// any command-specific extras; identifies a run in artifact headers.
std::string config_hash_hex(const RunConfig& config, std::string_view extra = {});

/// Identification block embedded in every artifact (header comment in CSV
/// and SVG, "meta" object in JSON).  Contains no timestamps: identical
/// config + seed must give identical bytes.
struct ArtifactMeta {
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

ArtifactMeta make_meta(const RunConfig& config, std::string_view extra = {});
std::string header_comment(const ArtifactMeta& meta);
nlohmann::ordered_json meta_json(const ArtifactMeta& meta);

/// CSV schemas: `theta_urad,probability` or `theta_urad,successes,trials`.
std::string fringe_csv(const FringeCurve& curve, const ArtifactMeta& meta);

/// CSV schema `theta_urad,cfi,qfi,shot_noise,sub_shot_noise` (flag as 0/1).
std::string fisher_csv(const std::vector<FisherReport>& reports, const ArtifactMeta& meta);

/// CSV schema `n,qfi,shot_noise,exponent_so_far`; the n = 1 row has no
/// exponent yet and leaves the field empty.
std::string scaling_csv(const ScalingTable& table, const ArtifactMeta& meta);

nlohmann::ordered_json fringe_json(const FringeCurve& curve, const ArtifactMeta& meta);
nlohmann::ordered_json fisher_json(const std::vector<FisherReport>& reports,
                                   const ArtifactMeta& meta);
nlohmann::ordered_json scaling_json(const ScalingTable& table, const ArtifactMeta& meta);
nlohmann::ordered_json qfi_json(const ProbeConfig& probe, const ArtifactMeta& meta);
nlohmann::ordered_json fit_result_json(const FitResult& fit, const ArtifactMeta& meta);
nlohmann::ordered_json saturation_json(const SaturationResult& result, const ArtifactMeta& meta);

/// Parses either fringe CSV schema; header comments allowed.  Malformed rows
/// raise errors naming the 1-based line number.  Curves read back with a
/// probability column get count_model exact, count columns get binomial.
FringeCurve read_fringe_csv(std::istream& in);
FringeCurve read_fringe_csv_file(const std::string& path);

/// Writes through a temp file in the same directory plus rename, so readers
/// never observe a partial artifact.
void atomic_write_file(const std::string& path, const std::string& content);

/// Minimal standalone plots: polyline + axes + extreme tick labels.
std::string fringe_svg(const FringeCurve& curve, const ArtifactMeta& meta);
/// CFI curve with the constant QFI line and dashed shot-noise rule.
std::string fisher_svg(const std::vector<FisherReport>& reports, const ArtifactMeta& meta);

}  // namespace tiltsense
