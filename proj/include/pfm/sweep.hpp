#pragma once

// Parameter sweeps over (epsilon, delta) and their CSV form.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfm/attack.hpp"

namespace pfm {

// Parses "pi", "pi/8", "3pi/4", "3*pi/4", "-pi/2" or a plain number (radians).
double parse_angle(std::string_view text);
double parse_number(std::string_view text);

// Comma-separated items; an item "start:stop:step" expands to an inclusive
// arithmetic range. Each scalar goes through parse_value.
std::vector<double> parse_grid(std::string_view text, const std::function<double(std::string_view)>& parse_value);

double degrees_to_radians(double deg);
double radians_to_degrees(double rad);

struct SweepConfig {
  std::vector<double> epsilon_grid;  // radians
  std::vector<double> delta_grid;    // radians
  AttackKind attack_kind = AttackKind::pfm;
  std::string output_path;
  std::optional<std::uint64_t> oracle_trials;
  std::optional<std::uint64_t> seed;
  bool reproducible = false;
};

inline constexpr std::uint64_t kDefaultSeed = 20110615;

struct SweepRow {
  double epsilon_deg = 0.0;
  double delta_rad = 0.0;
  double e_B = 0.0;
  double p_succ = 0.0;
  double lambda_0 = 0.0;
  double lambda_3 = 0.0;
  double x = 0.0;
  double max_fiber_km = 0.0;
  std::optional<double> oracle_e_B;
  std::optional<double> oracle_p;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> notices;  // skipped grid points
};

// Rows in epsilon-major order. epsilon = 0 is skipped for the pfm kind with a
// notice; the phase-remapping kind ignores the epsilon grid (one row per delta).
SweepResult run_sweep(const SweepConfig& config);

SweepRow make_row(const AttackReport& report);

// Scientific notation below 1e-3, 12 significant digits otherwise.
std::string format_number(double v);

inline constexpr std::string_view kCsvHeader =
    "epsilon_deg,delta_rad,e_B,p_succ,lambda_0,lambda_3,x,max_fiber_km,oracle_e_B,oracle_p";

std::string format_row(const SweepRow& row);
void write_csv(std::ostream& out, const SweepConfig& config, const SweepResult& result);
// Writes through a temporary file and renames; nothing is left behind on failure.
void write_csv_file(const SweepConfig& config, const SweepResult& result);
std::vector<SweepRow> parse_csv(std::istream& in);

std::string_view version();

}  // namespace pfm
