#include "tiltsense/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "tiltsense/units.hpp"
#include "tiltsense/version.hpp"

namespace tiltsense {

namespace {

using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <class T>
T parse_number(std::string_view text, const std::string& what) {
  const std::string_view t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw std::invalid_argument(what + ": cannot parse '" + std::string(t) + "'");
  return value;
}

}  // namespace

namespace {

// key=value grammar shared by the map reader and load_run_config; errors
// carry 1-based line numbers without the "config:" prefix.
template <class Fn>
void parse_key_value_lines(std::istream& in, Fn&& fn) {
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key{trim(stripped.substr(0, eq))};
    if (key.empty())
      throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
    fn(line_no, key, std::string(trim(stripped.substr(eq + 1))));
  }
}

}  // namespace

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::map<std::string, std::string> entries;
  try {
    parse_key_value_lines(
        in, [&](int, const std::string& key, const std::string& value) { entries[key] = value; });
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  return entries;
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "n")
    config.n = parse_number<int>(value, key);
  else if (key == "lambda_nm")
    config.lambda_nm = parse_number<double>(value, key);
  else if (key == "d_mm")
    config.d_mm = parse_number<double>(value, key);
  else if (key == "sigma2_mm2")
    config.sigma2_mm2 = parse_number<double>(value, key);
  else if (key == "cov_mm2")
    config.cov_mm2 = parse_number<double>(value, key);
  else if (key == "visibility")
    config.visibility = parse_number<double>(value, key);
  else if (key == "theta_min_urad")
    config.theta_min_urad = parse_number<double>(value, key);
  else if (key == "theta_max_urad")
    config.theta_max_urad = parse_number<double>(value, key);
  else if (key == "points")
    config.points = parse_number<int>(value, key);
  else if (key == "trials")
    config.trials = parse_number<std::int64_t>(value, key);
  else if (key == "replications")
    config.replications = parse_number<std::int64_t>(value, key);
  else if (key == "seed")
    config.seed = parse_number<std::uint64_t>(value, key);
  else if (key == "count_model")
    config.count_model = parse_count_model(value);
  else
    throw std::invalid_argument("unknown key '" + key + "'");
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  RunConfig config;
  try {
    parse_key_value_lines(in, [&](int line_no, const std::string& key,
                                  const std::string& value) {
      try {
        apply_config_entry(config, key, value);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
      }
    });
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  return config;
}

CountModel parse_count_model(const std::string& name) {
  if (name == "exact") return CountModel::exact;
  if (name == "binomial") return CountModel::binomial;
  if (name == "poisson_pair") return CountModel::poisson_pair;
  throw std::invalid_argument("count_model: expected exact|binomial|poisson_pair, got '" +
                              name + "'");
}

std::string count_model_name(CountModel model) {
  switch (model) {
    case CountModel::exact: return "exact";
    case CountModel::binomial: return "binomial";
    case CountModel::poisson_pair: return "poisson_pair";
  }
  throw std::logic_error("count_model_name: unhandled enumerator");
}

ProbeConfig probe_from(const RunConfig& config) {
  if (!(config.lambda_nm > 0.0))
    throw std::invalid_argument("config: lambda_nm must be positive");
  return make_probe(config.n, units::wavenumber_from_lambda_nm(config.lambda_nm),
                    units::mm_to_m(config.d_mm), units::mm2_to_m2(config.sigma2_mm2),
                    units::mm2_to_m2(config.cov_mm2), config.visibility);
}

std::vector<double> theta_grid_from(const RunConfig& config) {
  if (config.points < 1) throw std::invalid_argument("config: points must be >= 1");
  if (config.points == 1) return {units::urad_to_rad(config.theta_min_urad)};
  if (!(config.theta_min_urad < config.theta_max_urad))
    throw std::invalid_argument("config: theta_min_urad must be below theta_max_urad");
  return linspace(units::urad_to_rad(config.theta_min_urad),
                  units::urad_to_rad(config.theta_max_urad), config.points);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: buffer exhausted");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string config_hash_hex(const RunConfig& config, std::string_view extra) {
  std::string canon;
  canon += "n=" + std::to_string(config.n) + '\n';
  canon += "lambda_nm=" + format_double(config.lambda_nm) + '\n';
  canon += "d_mm=" + format_double(config.d_mm) + '\n';
  canon += "sigma2_mm2=" + format_double(config.sigma2_mm2) + '\n';
  canon += "cov_mm2=" + format_double(config.cov_mm2) + '\n';
  canon += "visibility=" + format_double(config.visibility) + '\n';
  canon += "theta_min_urad=" + format_double(config.theta_min_urad) + '\n';
  canon += "theta_max_urad=" + format_double(config.theta_max_urad) + '\n';
  canon += "points=" + std::to_string(config.points) + '\n';
  canon += "trials=" + std::to_string(config.trials) + '\n';
  canon += "replications=" + std::to_string(config.replications) + '\n';
  canon += "seed=" + std::to_string(config.seed) + '\n';
  canon += "count_model=" + count_model_name(config.count_model) + '\n';
  canon += extra;
  const std::uint64_t h = fnv1a64(canon);
  char buf[17];
  for (int i = 0; i < 16; ++i) buf[15 - i] = "0123456789abcdef"[(h >> (4 * i)) & 0xF];
  buf[16] = '\0';
  return std::string(buf);
}

ArtifactMeta make_meta(const RunConfig& config, std::string_view extra) {
  return ArtifactMeta{kVersion, config_hash_hex(config, extra), config.seed};
}

std::string header_comment(const ArtifactMeta& meta) {
  return "# tiltsense " + meta.version + " config=" + meta.config_hash +
         " seed=" + std::to_string(meta.seed) + "\n";
}

nlohmann::ordered_json meta_json(const ArtifactMeta& meta) {
  return ordered_json{{"tool", "tiltsense"},
                      {"version", meta.version},
                      {"config_hash", meta.config_hash},
                      {"seed", meta.seed}};
}

namespace {

bool curve_has_counts(const FringeCurve& curve) {
  if (curve.records.empty()) return false;
  const bool counts = curve.records.front().successes.has_value();
  for (const auto& r : curve.records) {
    if (r.successes.has_value() != counts)
      throw std::invalid_argument("fringe csv: mixed record shapes cannot be serialized");
  }
  return counts;
}

}  // namespace

std::string fringe_csv(const FringeCurve& curve, const ArtifactMeta& meta) {
  curve.validate();
  const bool counts = curve_has_counts(curve);
  std::string out = header_comment(meta);
  out += counts ? "theta_urad,successes,trials\n" : "theta_urad,probability\n";
  for (const auto& r : curve.records) {
    out += format_double(units::rad_to_urad(r.theta));
    if (counts) {
      out += ',' + std::to_string(*r.successes) + ',' + std::to_string(*r.trials);
    } else {
      out += ',' + format_double(*r.probability);
    }
    out += '\n';
  }
  return out;
}

std::string fisher_csv(const std::vector<FisherReport>& reports, const ArtifactMeta& meta) {
  std::string out = header_comment(meta);
  out += "theta_urad,cfi,qfi,shot_noise,sub_shot_noise\n";
  for (const auto& r : reports) {
    out += format_double(units::rad_to_urad(r.theta));
    out += ',' + format_double(r.cfi);
    out += ',' + format_double(r.qfi);
    out += ',' + format_double(r.shot_noise_baseline);
    out += r.sub_shot_noise ? ",1\n" : ",0\n";
  }
  return out;
}

std::string scaling_csv(const ScalingTable& table, const ArtifactMeta& meta) {
  std::string out = header_comment(meta);
  out += "n,qfi,shot_noise,exponent_so_far\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.n);
    out += ',' + format_double(row.qfi);
    out += ',' + format_double(row.baseline);
    out += ',';
    if (std::isfinite(row.exponent_so_far)) out += format_double(row.exponent_so_far);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json fringe_json(const FringeCurve& curve, const ArtifactMeta& meta) {
  curve.validate();
  ordered_json records = ordered_json::array();
  for (const auto& r : curve.records) {
    ordered_json rec{{"theta_urad", units::rad_to_urad(r.theta)}};
    if (r.probability) rec["probability"] = *r.probability;
    if (r.successes) rec["successes"] = *r.successes;
    if (r.trials) rec["trials"] = *r.trials;
    records.push_back(std::move(rec));
  }
  return ordered_json{{"meta", meta_json(meta)},
                      {"count_model", count_model_name(curve.count_model)},
                      {"records", std::move(records)}};
}

nlohmann::ordered_json fisher_json(const std::vector<FisherReport>& reports,
                                   const ArtifactMeta& meta) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : reports) {
    rows.push_back(ordered_json{{"theta_urad", units::rad_to_urad(r.theta)},
                                {"cfi", r.cfi},
                                {"qfi", r.qfi},
                                {"shot_noise", r.shot_noise_baseline},
                                {"sub_shot_noise", r.sub_shot_noise}});
  }
  return ordered_json{{"meta", meta_json(meta)}, {"rows", std::move(rows)}};
}

nlohmann::ordered_json scaling_json(const ScalingTable& table, const ArtifactMeta& meta) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r{{"n", row.n}, {"qfi", row.qfi}, {"shot_noise", row.baseline}};
    if (std::isfinite(row.exponent_so_far)) r["exponent_so_far"] = row.exponent_so_far;
    rows.push_back(std::move(r));
  }
  return ordered_json{
      {"meta", meta_json(meta)}, {"rows", std::move(rows)}, {"exponent", table.exponent}};
}

nlohmann::ordered_json qfi_json(const ProbeConfig& probe, const ArtifactMeta& meta) {
  const double f = qfi(probe);
  const double baseline = shot_noise_baseline(probe);
  return ordered_json{{"meta", meta_json(meta)},
                      {"n", probe.n_photons()},
                      {"qfi", f},
                      {"shot_noise", baseline},
                      {"ratio", f / baseline}};
}

nlohmann::ordered_json fit_result_json(const FitResult& fit, const ArtifactMeta& meta) {
  return ordered_json{
      {"meta", meta_json(meta)},
      {"v", fit.visibility_hat},
      {"sigma2_ell_mm2", units::m2_to_mm2(fit.sigma2_ell_hat)},
      {"d_mm", units::m_to_mm(fit.d_hat)},
      {"errors",
       ordered_json{{"v", fit.parameter_errors[0]},
                    {"sigma2_ell_mm2", units::m2_to_mm2(fit.parameter_errors[1])},
                    {"d_mm", units::m_to_mm(fit.parameter_errors[2])}}},
      {"rss", fit.residual_sum_squares},
      {"converged", fit.converged},
      {"iterations", fit.iterations},
      {"d_fixed_to_zero", fit.d_fixed_to_zero}};
}

nlohmann::ordered_json saturation_json(const SaturationResult& result,
                                       const ArtifactMeta& meta) {
  return ordered_json{{"meta", meta_json(meta)},
                      {"theta_true", result.theta_true},
                      {"theta_hat_mean", result.theta_hat_mean},
                      {"empirical_mse", result.empirical_mse},
                      {"crb", result.crb},
                      {"ratio", result.ratio},
                      {"seed", result.seed},
                      {"trials", result.trials},
                      {"replications", result.replications},
                      {"clipped_replications", result.clipped_replications}};
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void csv_error(int line_no, const std::string& message) {
  throw std::invalid_argument("fringe csv: line " + std::to_string(line_no) + ": " + message);
}

}  // namespace

FringeCurve read_fringe_csv(std::istream& in) {
  FringeCurve curve;
  bool have_header = false;
  bool counts = false;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (!have_header) {
      if (stripped == "theta_urad,probability") {
        counts = false;
      } else if (stripped == "theta_urad,successes,trials") {
        counts = true;
      } else {
        csv_error(line_no,
                  "expected header 'theta_urad,probability' or 'theta_urad,successes,trials'");
      }
      have_header = true;
      curve.count_model = counts ? CountModel::binomial : CountModel::exact;
      continue;
    }
    const auto fields = split_fields(stripped);
    const std::size_t expected = counts ? 3 : 2;
    if (fields.size() != expected)
      csv_error(line_no, "expected " + std::to_string(expected) + " fields, got " +
                             std::to_string(fields.size()));
    FringeRecord rec;
    try {
      rec.theta = units::urad_to_rad(parse_number<double>(fields[0], "theta_urad"));
      if (counts) {
        rec.successes = parse_number<std::int64_t>(fields[1], "successes");
        rec.trials = parse_number<std::int64_t>(fields[2], "trials");
      } else {
        rec.probability = parse_number<double>(fields[1], "probability");
      }
    } catch (const std::invalid_argument& e) {
      csv_error(line_no, e.what());
    }
    if (counts) {
      if (*rec.trials < 1 || *rec.successes < 0 || *rec.successes > *rec.trials)
        csv_error(line_no, "need 0 <= successes <= trials, trials >= 1");
    } else if (!(*rec.probability >= 0.0 && *rec.probability <= 1.0)) {
      csv_error(line_no, "probability outside [0, 1]");
    }
    if (!curve.records.empty() && !(rec.theta > curve.records.back().theta))
      csv_error(line_no, "theta_urad values must be strictly increasing");
    curve.records.push_back(rec);
  }
  if (!have_header) throw std::invalid_argument("fringe csv: empty input");
  if (curve.records.empty()) throw std::invalid_argument("fringe csv: no data rows");
  curve.validate();
  return curve;
}

FringeCurve read_fringe_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("fringe csv: cannot open '" + path + "'");
  return read_fringe_csv(in);
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("failed to move artifact into place at '" + path +
                             "': " + ec.message());
  }
}

namespace {

constexpr double kSvgWidth = 720.0;
constexpr double kSvgHeight = 440.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 56.0;

struct PlotScale {
  double x_min, x_max, y_min, y_max;

  double x(double v) const {
    return kMarginLeft + (v - x_min) / (x_max - x_min) * (kSvgWidth - kMarginLeft - kMarginRight);
  }
  double y(double v) const {
    return kSvgHeight - kMarginBottom -
           (v - y_min) / (y_max - y_min) * (kSvgHeight - kMarginTop - kMarginBottom);
  }
};

std::string svg_num(double v) {
  return format_double(std::round(v * 100.0) / 100.0);
}

// Display-only tick labels: 6 significant digits, locale-independent.
std::string label_num(double v) {
  char buf[48];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  if (ec != std::errc{}) return "?";
  return std::string(buf, ptr);
}

void pad_range(double& lo, double& hi) {
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

std::string svg_open(const ArtifactMeta& meta) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(kSvgWidth) +
                    "\" height=\"" + svg_num(kSvgHeight) + "\" viewBox=\"0 0 " +
                    svg_num(kSvgWidth) + " " + svg_num(kSvgHeight) + "\">\n";
  out += "<!-- tiltsense " + meta.version + " config=" + meta.config_hash +
         " seed=" + std::to_string(meta.seed) + " -->\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

std::string svg_axes(const PlotScale& s, const std::string& x_label,
                     const std::string& y_label) {
  const double x0 = s.x(s.x_min), x1 = s.x(s.x_max);
  const double y0 = s.y(s.y_min), y1 = s.y(s.y_max);
  std::string out;
  out += "<line x1=\"" + svg_num(x0) + "\" y1=\"" + svg_num(y0) + "\" x2=\"" + svg_num(x1) +
         "\" y2=\"" + svg_num(y0) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + svg_num(x0) + "\" y1=\"" + svg_num(y0) + "\" x2=\"" + svg_num(x0) +
         "\" y2=\"" + svg_num(y1) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + svg_num(x0) + "\" y=\"" + svg_num(y0 + 18) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + label_num(s.x_min) + "</text>\n";
  out += "<text x=\"" + svg_num(x1) + "\" y=\"" + svg_num(y0 + 18) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + label_num(s.x_max) + "</text>\n";
  out += "<text x=\"" + svg_num(x0 - 6) + "\" y=\"" + svg_num(y0 + 4) +
         "\" font-size=\"12\" text-anchor=\"end\">" + label_num(s.y_min) + "</text>\n";
  out += "<text x=\"" + svg_num(x0 - 6) + "\" y=\"" + svg_num(y1 + 4) +
         "\" font-size=\"12\" text-anchor=\"end\">" + label_num(s.y_max) + "</text>\n";
  out += "<text x=\"" + svg_num(0.5 * (x0 + x1)) + "\" y=\"" + svg_num(y0 + 38) +
         "\" font-size=\"13\" text-anchor=\"middle\">" + x_label + "</text>\n";
  out += "<text x=\"" + svg_num(x0 - 58) + "\" y=\"" + svg_num(0.5 * (y0 + y1)) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         svg_num(x0 - 58) + " " + svg_num(0.5 * (y0 + y1)) + ")\">" + y_label + "</text>\n";
  return out;
}

std::string svg_polyline(const PlotScale& s, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& stroke,
                         bool dashed) {
  std::string out = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\"";
  if (dashed) out += " stroke-dasharray=\"6 4\"";
  out += " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += svg_num(s.x(xs[i])) + ',' + svg_num(s.y(ys[i]));
  }
  out += "\"/>\n";
  return out;
}

}  // namespace

std::string fringe_svg(const FringeCurve& curve, const ArtifactMeta& meta) {
  curve.validate();
  if (curve.records.empty()) throw std::invalid_argument("fringe svg: empty curve");
  std::vector<double> xs, ys;
  xs.reserve(curve.records.size());
  ys.reserve(curve.records.size());
  for (std::size_t i = 0; i < curve.records.size(); ++i) {
    xs.push_back(units::rad_to_urad(curve.records[i].theta));
    ys.push_back(curve.probability_at(i));
  }
  PlotScale s{xs.front(), xs.back(), *std::min_element(ys.begin(), ys.end()),
              *std::max_element(ys.begin(), ys.end())};
  if (s.x_min == s.x_max) {
    s.x_min -= 0.5;
    s.x_max += 0.5;
  }
  pad_range(s.y_min, s.y_max);
  std::string out = svg_open(meta);
  out += svg_axes(s, "theta (urad)", "probability");
  out += svg_polyline(s, xs, ys, "#1f6fb2", false);
  out += "</svg>\n";
  return out;
}

std::string fisher_svg(const std::vector<FisherReport>& reports, const ArtifactMeta& meta) {
  if (reports.empty()) throw std::invalid_argument("fisher svg: empty report table");
  std::vector<double> xs, cfi, qfi_line, baseline;
  xs.reserve(reports.size());
  for (const auto& r : reports) {
    xs.push_back(units::rad_to_urad(r.theta));
    cfi.push_back(r.cfi);
    qfi_line.push_back(r.qfi);
    baseline.push_back(r.shot_noise_baseline);
  }
  double y_min = 0.0;
  double y_max = 0.0;
  for (const auto& r : reports) y_max = std::max({y_max, r.cfi, r.qfi, r.shot_noise_baseline});
  PlotScale s{xs.front(), xs.back(), y_min, y_max};
  if (s.x_min == s.x_max) {
    s.x_min -= 0.5;
    s.x_max += 0.5;
  }
  pad_range(s.y_min, s.y_max);
  std::string out = svg_open(meta);
  out += svg_axes(s, "theta (urad)", "Fisher information (rad^-2)");
  out += svg_polyline(s, xs, qfi_line, "#7f7f7f", false);
  out += svg_polyline(s, xs, baseline, "#c23b22", true);
  out += svg_polyline(s, xs, cfi, "#1f6fb2", false);
  out += "</svg>\n";
  return out;
}

}  // namespace tiltsense
