#include "pfm/mcoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pfm/errors.hpp"

namespace pfm {

namespace {

constexpr double kProbabilityTol = 1e-9;

std::array<double, kOutcomeCount> cumulative(const std::array<double, kOutcomeCount>& p) {
  std::array<double, kOutcomeCount> cdf{};
  double running = 0.0;
  for (std::size_t i = 0; i < kOutcomeCount; ++i) {
    running += std::max(p[i], 0.0);
    cdf[i] = running;
  }
  for (auto& c : cdf) c /= running;
  cdf.back() = 1.0;
  return cdf;
}

Outcome draw(const std::array<double, kOutcomeCount>& cdf, Rng& rng) {
  const double u = uniform01(rng);
  for (std::size_t i = 0; i + 1 < kOutcomeCount; ++i) {
    if (u < cdf[i]) return static_cast<Outcome>(i);
  }
  return Outcome::vac;
}

// |<phi_{basis}|phi_resend>|^2 at delta = pi/2, so bit 0 of the basis.
std::array<std::array<double, 2>, 4> bob_bit0_table() {
  std::array<std::array<double, 2>, 4> table{};
  for (int resend = 0; resend < 4; ++resend) {
    const ComplexVector sent = bb84_state(resend, std::numbers::pi / 2.0).vector;
    for (int basis = 0; basis < 2; ++basis) {
      const ComplexVector zero = bb84_state(basis, std::numbers::pi / 2.0).vector;
      table[resend][basis] = std::norm(inner(zero, sent));
    }
  }
  return table;
}

const std::array<std::array<double, 2>, 4>& bob_table() {
  static const auto table = bob_bit0_table();
  return table;
}

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::array<double, kOutcomeCount> outcome_probabilities(const ComplexVector& state, const PovmStrategy& strat) {
  if (state.dim() != strat.dim()) throw DimensionMismatch("outcome_probabilities: state/strategy dimension");
  std::array<double, kOutcomeCount> p{};
  double total = 0.0;
  for (std::size_t i = 0; i < kOutcomeCount; ++i) {
    const complex amp = inner(state, strat.op(static_cast<Outcome>(i)) * state);
    p[i] = amp.real();
    if (p[i] < -kProbabilityTol) {
      std::ostringstream msg;
      msg << "outcome " << i << " has probability " << p[i];
      throw NegativeProbability(msg.str());
    }
    total += p[i];
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    std::ostringstream msg;
    msg << "outcome probabilities sum to " << total;
    throw DomainError(msg.str());
  }
  return p;
}

Outcome sample_povm_outcome(const ComplexVector& state, const PovmStrategy& strat, Rng& rng) {
  return draw(cumulative(outcome_probabilities(state, strat)), rng);
}

BobMeasurement simulate_bob(std::optional<int> resend_k, Basis bob_basis, Basis alice_basis, Rng& rng) {
  if (!resend_k) return {};
  if (*resend_k < 0 || *resend_k > 3) throw DomainError("simulate_bob: resend index must be in 0..3");
  const double p0 = bob_table()[static_cast<std::size_t>(*resend_k)][static_cast<std::size_t>(bob_basis)];
  const int bit = uniform01(rng) < p0 ? 0 : 1;
  return {bit, bob_basis == alice_basis};
}

TrialSimulator::TrialSimulator(const AttackEnsemble& ens, const PovmStrategy& strat) {
  for (std::size_t k = 0; k < 4; ++k) eve_cdf_[k] = cumulative(outcome_probabilities(ens.states[k], strat));
}

TrialRecord TrialSimulator::run(Rng& rng) const {
  TrialRecord rec;
  rec.alice_k = static_cast<int>(rng() >> 62);
  rec.eve_outcome = draw(eve_cdf_[static_cast<std::size_t>(rec.alice_k)], rng);
  rec.bob_basis = (rng() >> 63) == 0 ? Basis::z : Basis::x;
  const BobMeasurement bob =
      simulate_bob(PovmStrategy::resend(rec.eve_outcome), rec.bob_basis, basis_of(rec.alice_k), rng);
  rec.bob_bit = bob.bit;
  rec.sifted = bob.sifted;
  rec.error = bob.sifted && *bob.bit != bit_of(rec.alice_k);
  return rec;
}

OracleEstimate run_oracle(const AttackEnsemble& ens, const PovmStrategy& strat, std::uint64_t n, std::uint64_t seed) {
  if (n < kMinOracleTrials) {
    std::ostringstream msg;
    msg << "below minimum trial count (" << n << " < " << kMinOracleTrials << ")";
    throw DomainError(msg.str());
  }
  const TrialSimulator sim(ens, strat);
  Rng rng(seed);
  OracleEstimate est;
  est.n_trials = n;
  est.rng_seed = seed;
  for (std::uint64_t t = 0; t < n; ++t) {
    const TrialRecord rec = sim.run(rng);
    if (rec.eve_outcome != Outcome::vac) ++est.conclusive;
    if (rec.sifted) ++est.sifted;
    if (rec.error) ++est.errors;
  }
  est.p_succ_hat = static_cast<double>(est.conclusive) / static_cast<double>(n);
  est.stderr_p = std::sqrt(est.p_succ_hat * (1.0 - est.p_succ_hat) / static_cast<double>(n));
  if (est.sifted > 0) {
    const auto sifted = static_cast<double>(est.sifted);
    est.e_B_hat = static_cast<double>(est.errors) / sifted;
    est.stderr_e = std::sqrt(est.e_B_hat * (1.0 - est.e_B_hat) / sifted);
  } else {
    est.e_B_hat = std::numeric_limits<double>::quiet_NaN();
    est.stderr_e = std::numeric_limits<double>::infinity();
  }
  return est;
}

}  // namespace pfm
