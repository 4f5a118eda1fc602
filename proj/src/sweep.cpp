#include "pfm/sweep.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "pfm/errors.hpp"
#include "pfm/mcoracle.hpp"

#ifndef PFM_VERSION
#define PFM_VERSION "0.0.0"
#endif

namespace pfm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_optional(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  return parse_number(field);
}

}  // namespace

std::string_view version() { return PFM_VERSION; }

double parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

double parse_angle(std::string_view text) {
  const std::string_view original = trim(text);
  std::string_view s = original;
  const std::size_t pi_pos = s.find("pi");
  if (pi_pos == std::string_view::npos) return parse_number(s);

  std::string_view coeff = trim(s.substr(0, pi_pos));
  std::string_view rest = trim(s.substr(pi_pos + 2));
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  double factor = 1.0;
  if (coeff == "-") {
    factor = -1.0;
  } else if (!coeff.empty() && coeff != "+") {
    factor = parse_number(coeff);
  }
  double denominator = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw DomainError("malformed angle: '" + std::string(original) + "'");
    denominator = parse_number(rest.substr(1));
    if (denominator == 0.0) throw DomainError("zero denominator in angle: '" + std::string(original) + "'");
  }
  return factor * std::numbers::pi / denominator;
}

std::vector<double> parse_grid(std::string_view text, const std::function<double(std::string_view)>& parse_value) {
  std::vector<double> values;
  for (std::string_view item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      values.push_back(parse_value(item));
    } else if (parts.size() == 3) {
      const double start = parse_value(parts[0]);
      const double stop = parse_value(parts[1]);
      const double step = parse_value(parts[2]);
      if (!(step > 0.0) || stop < start) throw DomainError("bad range '" + std::string(item) + "'");
      const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (std::size_t i = 0; i < count; ++i) values.push_back(start + static_cast<double>(i) * step);
    } else {
      throw DomainError("bad grid item '" + std::string(item) + "'");
    }
  }
  if (values.empty()) throw DomainError("empty grid");
  return values;
}

double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

SweepRow make_row(const AttackReport& report) {
  SweepRow row;
  row.epsilon_deg = radians_to_degrees(report.epsilon);
  row.delta_rad = report.delta;
  row.e_B = report.e_B;
  row.p_succ = report.p_succ;
  row.lambda_0 = report.lambda_0;
  row.lambda_3 = report.lambda_3;
  row.x = report.x;
  row.max_fiber_km = report.max_fiber_km;
  return row;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.epsilon_grid.empty() && config.attack_kind == AttackKind::pfm) throw DomainError("empty epsilon grid");
  if (config.delta_grid.empty()) throw DomainError("empty delta grid");
  const std::uint64_t seed = config.seed.value_or(kDefaultSeed);

  SweepResult result;
  auto add_point = [&](double epsilon, double delta) {
    const Analysis analysis = analyze(config.attack_kind, epsilon, delta);
    SweepRow row = make_row(analysis.report);
    if (config.oracle_trials) {
      // Each grid point gets its own stream derived from the master seed.
      const std::uint64_t stream = seed + 0x9E3779B97F4A7C15ULL * (result.rows.size() + 1);
      const OracleEstimate est = run_oracle(analysis.ensemble, analysis.strategy, *config.oracle_trials, stream);
      row.oracle_e_B = est.e_B_hat;
      row.oracle_p = est.p_succ_hat;
    }
    result.rows.push_back(row);
  };

  if (config.attack_kind == AttackKind::phase_remapping) {
    for (double delta : config.delta_grid) add_point(0.0, delta);
    return result;
  }
  for (double epsilon : config.epsilon_grid) {
    if (epsilon == 0.0) {
      result.notices.push_back("skipped epsilon_deg=0: singular point, the states span only two dimensions");
      continue;
    }
    for (double delta : config.delta_grid) add_point(epsilon, delta);
  }
  return result;
}

std::string format_number(double v) {
  char buf[64];
  if (v == 0.0) {
    return "0";
  }
  if (std::abs(v) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.11e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.12g", v);
  }
  return buf;
}

std::string format_row(const SweepRow& row) {
  std::ostringstream out;
  out << format_number(row.epsilon_deg) << ',' << format_number(row.delta_rad) << ',' << format_number(row.e_B)
      << ',' << format_number(row.p_succ) << ',' << format_number(row.lambda_0) << ','
      << format_number(row.lambda_3) << ',' << format_number(row.x) << ',' << format_number(row.max_fiber_km)
      << ',';
  if (row.oracle_e_B) out << format_number(*row.oracle_e_B);
  out << ',';
  if (row.oracle_p) out << format_number(*row.oracle_p);
  return out.str();
}

void write_csv(std::ostream& out, const SweepConfig& config, const SweepResult& result) {
  out << kCsvHeader << '\n';
  for (const auto& row : result.rows) out << format_row(row) << '\n';
  out << "# pfm-attack " << version() << " sweep\n";
  out << "# attack=" << (config.attack_kind == AttackKind::pfm ? "pfm" : "remap") << '\n';
  out << "# seed=" << config.seed.value_or(kDefaultSeed) << '\n';
  if (config.oracle_trials) out << "# oracle_trials=" << *config.oracle_trials << '\n';
  for (const auto& notice : result.notices) out << "# " << notice << '\n';
  if (!config.reproducible) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    out << "# generated=" << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
  }
}

void write_csv_file(const SweepConfig& config, const SweepResult& result) {
  namespace fs = std::filesystem;
  if (config.output_path.empty()) throw DomainError("sweep: no output path");
  const fs::path target(config.output_path);
  const fs::path partial = target.string() + ".partial";
  try {
    {
      std::ofstream out(partial, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot open '" + partial.string() + "' for writing");
      write_csv(out, config, result);
      out.flush();
      if (!out) throw Error("write failed for '" + partial.string() + "'");
    }
    std::error_code ec;
    fs::rename(partial, target, ec);
    if (ec) throw Error("cannot move output into '" + target.string() + "': " + ec.message());
  } catch (...) {
    std::error_code ignored;
    fs::remove(partial, ignored);
    throw;
  }
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!seen_header) {
      if (view != kCsvHeader) throw DomainError("unexpected CSV header: " + std::string(view));
      seen_header = true;
      continue;
    }
    const auto fields = split(view, ',');
    if (fields.size() != 10) throw DomainError("CSV row has " + std::to_string(fields.size()) + " fields");
    SweepRow row;
    row.epsilon_deg = parse_number(fields[0]);
    row.delta_rad = parse_number(fields[1]);
    row.e_B = parse_number(fields[2]);
    row.p_succ = parse_number(fields[3]);
    row.lambda_0 = parse_number(fields[4]);
    row.lambda_3 = parse_number(fields[5]);
    row.x = parse_number(fields[6]);
    row.max_fiber_km = parse_number(fields[7]);
    row.oracle_e_B = parse_optional(fields[8]);
    row.oracle_p = parse_optional(fields[9]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pfm
