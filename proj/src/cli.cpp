#include "pfm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "pfm/attack.hpp"
#include "pfm/errors.hpp"
#include "pfm/mcoracle.hpp"
#include "pfm/optics.hpp"
#include "pfm/sweep.hpp"

namespace pfm::cli {

namespace {

constexpr std::array<std::string_view, 4> kCommands{"eval", "sweep", "verify", "compensation"};

AttackKind parse_kind(const std::string& name) { return name == "remap" ? AttackKind::phase_remapping : AttackKind::pfm; }

double require_epsilon(AttackKind kind, const std::optional<double>& epsilon_deg) {
  if (kind == AttackKind::phase_remapping) return 0.0;
  if (!epsilon_deg) throw DomainError("--epsilon-deg is required for the pfm attack");
  return degrees_to_radians(*epsilon_deg);
}

void print_report(std::ostream& out, const std::string& attack, const AttackReport& r) {
  out << std::setprecision(6);
  out << std::left << std::setw(14) << "attack" << attack << '\n'
      << std::setw(14) << "epsilon_deg" << radians_to_degrees(r.epsilon) << '\n'
      << std::setw(14) << "delta_rad" << r.delta << '\n'
      << std::setw(14) << "e_B" << r.e_B << '\n'
      << std::setw(14) << "p_succ" << r.p_succ << '\n'
      << std::setw(14) << "lambda_0" << r.lambda_0 << '\n'
      << std::setw(14) << "lambda_3" << r.lambda_3 << '\n'
      << std::setw(14) << "x" << r.x << '\n'
      << std::setw(14) << "max_fiber_km" << r.max_fiber_km << '\n';
}

struct CommonArgs {
  std::optional<double> epsilon_deg;
  std::string delta = "pi/2";
  std::string attack = "pfm";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--epsilon-deg", args.epsilon_deg, "Faraday rotator deviation from 45 degrees, in degrees");
  cmd->add_option("--delta", args.delta, "Phase step between Alice's states: radians or pi/N syntax")
      ->capture_default_str();
  cmd->add_option("--attack", args.attack, "pfm (3-D suboptimal) or remap (2-D phase remapping)")
      ->check(CLI::IsMember({"pfm", "remap"}))
      ->capture_default_str();
}

bool within_three_sigma(std::ostream& out, const char* name, double closed, double estimate, double sigma) {
  const double diff = std::abs(estimate - closed);
  const bool ok = diff <= 3.0 * sigma;
  out << (ok ? "[PASS] " : "[FAIL] ") << name << ": closed form " << closed << ", oracle " << estimate
      << " +- " << sigma << " (|diff| = " << diff << ", 3 sigma = " << 3.0 * sigma << ")\n";
  return ok;
}

}  // namespace

std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw DomainError("--config needs a file path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;

  std::ifstream in(*path);
  if (!in) throw DomainError("cannot read config file '" + *path + "'");
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError(*path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    if (value == "false") continue;
    extra.push_back("--" + key);
    if (!value.empty() && value != "true") extra.push_back(value);
  }

  auto pos = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (pos == args.end()) {
    args.insert(args.end(), extra.begin(), extra.end());
  } else {
    args.insert(pos + 1, extra.begin(), extra.end());
  }
  return args;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passive Faraday-mirror attack simulator for plug-and-play QKD", "pfm"};
  app.option_defaults()->take_last();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));
  std::string config_path;
  app.add_option("--config", config_path, "key=value file mirroring the command-line flags");

  CommonArgs eval_args;
  std::string eval_out;
  auto* eval = app.add_subcommand("eval", "Evaluate the attack at one (epsilon, delta) point");
  add_common(eval, eval_args);
  eval->add_option("--out", eval_out, "Also write the point as a one-row CSV");
  bool eval_reproducible = false;
  eval->add_flag("--reproducible", eval_reproducible, "Omit the timestamp comment from CSV output");

  std::string sweep_eps_deg, sweep_eps_rad, sweep_delta = "pi/2", sweep_attack = "pfm", sweep_out;
  std::optional<std::uint64_t> sweep_trials, sweep_seed;
  bool sweep_reproducible = false;
  auto* sweep = app.add_subcommand("sweep", "Sweep an (epsilon, delta) grid and write CSV");
  auto* eps_deg_opt =
      sweep->add_option("--epsilon-deg", sweep_eps_deg, "Epsilon grid in degrees: a,b,c or start:stop:step");
  sweep->add_option("--epsilon-rad", sweep_eps_rad, "Epsilon grid in radians")->excludes(eps_deg_opt);
  sweep->add_option("--delta", sweep_delta, "Delta grid: comma list of angles or start:stop:step")
      ->capture_default_str();
  sweep->add_option("--attack", sweep_attack, "pfm or remap")
      ->check(CLI::IsMember({"pfm", "remap"}))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV path")->required();
  sweep->add_option("--trials", sweep_trials, "Run the Monte Carlo oracle with this many trials per point");
  sweep->add_option("--seed", sweep_seed, "Master RNG seed for oracle runs");
  sweep->add_flag("--reproducible", sweep_reproducible, "Omit the timestamp comment");

  CommonArgs verify_args;
  std::uint64_t verify_trials = 10'000'000;
  std::uint64_t verify_seed = kDefaultSeed;
  auto* verify = app.add_subcommand("verify", "Check the closed form against the Monte Carlo oracle (3 sigma)");
  add_common(verify, verify_args);
  verify->add_option("--trials", verify_trials, "Number of simulated pulses")->capture_default_str();
  verify->add_option("--seed", verify_seed, "RNG seed")->capture_default_str();

  std::string comp_theta = "0", comp_phi_o = "0", comp_phi_e = "0";
  double comp_eps_deg = 1.0;
  auto* comp = app.add_subcommand("compensation", "Birefringence compensation residual for ideal and imperfect FM");
  comp->add_option("--theta-prime", comp_theta, "Channel eigenmode rotation angle")->capture_default_str();
  comp->add_option("--phi-o", comp_phi_o, "Ordinary ray phase")->capture_default_str();
  comp->add_option("--phi-e", comp_phi_e, "Extraordinary ray phase")->capture_default_str();
  comp->add_option("--epsilon-deg", comp_eps_deg, "Imperfect mirror deviation in degrees")->capture_default_str();

  try {
    args = expand_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (eval->parsed()) {
      const AttackKind kind = parse_kind(eval_args.attack);
      const double epsilon = require_epsilon(kind, eval_args.epsilon_deg);
      const double delta = parse_angle(eval_args.delta);
      const Analysis analysis = analyze(kind, epsilon, delta);
      print_report(out, eval_args.attack, analysis.report);
      if (!eval_out.empty()) {
        SweepConfig config;
        config.attack_kind = kind;
        config.output_path = eval_out;
        config.reproducible = eval_reproducible;
        write_csv_file(config, SweepResult{{make_row(analysis.report)}, {}});
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      SweepConfig config;
      config.attack_kind = parse_kind(sweep_attack);
      if (!sweep_eps_rad.empty()) {
        config.epsilon_grid = parse_grid(sweep_eps_rad, parse_angle);
      } else if (!sweep_eps_deg.empty()) {
        config.epsilon_grid = parse_grid(sweep_eps_deg, [](std::string_view s) { return degrees_to_radians(parse_number(s)); });
      } else if (config.attack_kind == AttackKind::pfm) {
        throw DomainError("sweep: --epsilon-deg or --epsilon-rad is required for the pfm attack");
      }
      config.delta_grid = parse_grid(sweep_delta, parse_angle);
      config.output_path = sweep_out;
      config.oracle_trials = sweep_trials;
      config.seed = sweep_seed;
      config.reproducible = sweep_reproducible;
      const SweepResult result = run_sweep(config);
      for (const auto& notice : result.notices) err << "notice: " << notice << '\n';
      write_csv_file(config, result);
      out << "wrote " << result.rows.size() << " rows to " << config.output_path << '\n';
      return kExitOk;
    }

    if (verify->parsed()) {
      const AttackKind kind = parse_kind(verify_args.attack);
      const double epsilon = require_epsilon(kind, verify_args.epsilon_deg);
      const double delta = parse_angle(verify_args.delta);
      if (verify_trials < kMinOracleTrials) {
        throw DomainError("below minimum trial count (" + std::to_string(verify_trials) + " < " +
                          std::to_string(kMinOracleTrials) + ")");
      }
      const Analysis analysis = analyze(kind, epsilon, delta);
      const OracleEstimate est = run_oracle(analysis.ensemble, analysis.strategy, verify_trials, verify_seed);
      out << std::setprecision(6);
      out << "trials " << est.n_trials << ", seed " << est.rng_seed << ", conclusive " << est.conclusive
          << ", sifted " << est.sifted << ", errors " << est.errors << '\n';
      const bool e_ok = within_three_sigma(out, "e_B", analysis.report.e_B, est.e_B_hat, est.stderr_e);
      const bool p_ok = within_three_sigma(out, "p_succ", analysis.report.p_succ, est.p_succ_hat, est.stderr_p);
      return e_ok && p_ok ? kExitOk : kExitVerificationFailed;
    }

    if (comp->parsed()) {
      const BirefringentChannel ch{parse_angle(comp_theta), parse_angle(comp_phi_o), parse_angle(comp_phi_e)};
      const FaradayMirror fm(degrees_to_radians(comp_eps_deg));
      const double ideal = verify_compensation(ch);
      const double imperfect = compensation_residual(ch, fm_matrix(fm));
      out << std::setprecision(6);
      out << "theta_prime " << ch.theta_prime << ", phi_o " << ch.phi_o << ", phi_e " << ch.phi_e << '\n';
      out << "ideal_fm_residual      " << ideal << (ideal <= 1e-10 ? "  (compensated)" : "  (NOT compensated)") << '\n';
      out << "imperfect_fm_residual  " << imperfect << "  (epsilon_deg " << comp_eps_deg << ")\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pfm::cli
