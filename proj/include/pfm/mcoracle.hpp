#pragma once

// Monte Carlo simulation of the sifted protocol under Eve's strategy. Used
// as an independent check on the closed-form QBER and success probability.

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "pfm/attack.hpp"
#include "pfm/statespace.hpp"

namespace pfm {

inline constexpr std::uint64_t kMinOracleTrials = 10'000;

using Rng = std::mt19937_64;

// Uniform in [0, 1) from the top 53 bits; identical across standard libraries.
double uniform01(Rng& rng);

// Bob's basis is identified by index parity: z = {phi_0, phi_2}, x = {phi_1, phi_3}.
enum class Basis { z = 0, x = 1 };

constexpr Basis basis_of(int k) { return k % 2 == 0 ? Basis::z : Basis::x; }
constexpr int bit_of(int k) { return k / 2; }

struct TrialRecord {
  int alice_k = 0;
  Outcome eve_outcome = Outcome::vac;
  Basis bob_basis = Basis::z;
  std::optional<int> bob_bit;
  bool sifted = false;
  bool error = false;
};

struct OracleEstimate {
  std::uint64_t n_trials = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  double e_B_hat = 0.0;
  double p_succ_hat = 0.0;
  double stderr_e = 0.0;
  double stderr_p = 0.0;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const OracleEstimate&, const OracleEstimate&) = default;
};

// <state|M_o|state> per Outcome. Throws NegativeProbability if any is below
// -1e-9, DomainError if they do not sum to 1 within 1e-9.
std::array<double, kOutcomeCount> outcome_probabilities(const ComplexVector& state, const PovmStrategy& strat);

Outcome sample_povm_outcome(const ComplexVector& state, const PovmStrategy& strat, Rng& rng);

struct BobMeasurement {
  std::optional<int> bit;  // none when Eve blocked the pulse
  bool sifted = false;     // a pulse arrived and Bob's basis equals Alice's
};

// Bob measures the resent standard BB84 state (delta = pi/2) in his basis
// by the Born rule.
BobMeasurement simulate_bob(std::optional<int> resend_k, Basis bob_basis, Basis alice_basis, Rng& rng);

// Precomputed outcome tables for repeated trials on one (ensemble, strategy).
class TrialSimulator {
 public:
  TrialSimulator(const AttackEnsemble& ens, const PovmStrategy& strat);

  TrialRecord run(Rng& rng) const;

 private:
  std::array<std::array<double, kOutcomeCount>, 4> eve_cdf_{};
};

// Reproducible for a given seed. Throws DomainError below kMinOracleTrials.
OracleEstimate run_oracle(const AttackEnsemble& ens, const PovmStrategy& strat, std::uint64_t n, std::uint64_t seed);

}  // namespace pfm
