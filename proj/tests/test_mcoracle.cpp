#include <doctest.h>

#include "pfm/errors.hpp"
#include "pfm/mcoracle.hpp"
#include "test_support.hpp"

using namespace pfm;
using pfm::testing::deg;
using pfm::testing::kPi;

namespace {

bool within_3_sigma(double estimate, double expected, double sigma) { return std::abs(estimate - expected) <= 3.0 * sigma; }

PovmStrategy blocking_strategy(std::size_t n) {
  PovmStrategy s;
  for (auto& m : s.conclusive) m = ComplexMatrix::zeros(n, n);
  s.vacuum = ComplexMatrix::identity(n);
  return s;
}

}  // namespace

TEST_SUITE("mcoracle") {

TEST_CASE("uniform01 stays in [0, 1)") {
  Rng rng(1);
  double lo = 1.0, hi = 0.0, mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u / n;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("a blocking-only strategy always yields vac") {
  const AttackEnsemble ens = build_ensemble(deg(1.0), kPi / 2.0);
  const PovmStrategy block = blocking_strategy(3);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) CHECK(sample_povm_outcome(ens.states[i % 4], block, rng) == Outcome::vac);
}

TEST_CASE("outcome probability checks") {
  const AttackEnsemble ens = build_ensemble(deg(1.0), kPi / 2.0);
  PovmStrategy bad = blocking_strategy(3);
  bad.conclusive[0] = -0.1 * ComplexMatrix::identity(3);
  bad.vacuum = ComplexMatrix::identity(3) + 0.1 * ComplexMatrix::identity(3);
  CHECK_THROWS_AS(outcome_probabilities(ens.states[0], bad), NegativeProbability);
  PovmStrategy incomplete = blocking_strategy(3);
  incomplete.vacuum = 0.5 * ComplexMatrix::identity(3);
  CHECK_THROWS_AS(outcome_probabilities(ens.states[0], incomplete), DomainError);
  CHECK_THROWS_AS(outcome_probabilities(ComplexVector{1.0, 0.0}, blocking_strategy(3)), DimensionMismatch);
}

TEST_CASE("per-state outcome frequencies match the Born probabilities") {
  const AttackEnsemble ens = build_ensemble(deg(1.0), kPi / 2.0);
  const PovmStrategy strat = build_suboptimal_povm(ens);
  Rng rng(44);
  const int n = 1'000'000;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto p = outcome_probabilities(ens.states[k], strat);
    std::array<int, kOutcomeCount> counts{};
    for (int t = 0; t < n; ++t) ++counts[static_cast<std::size_t>(sample_povm_outcome(ens.states[k], strat, rng))];
    for (std::size_t o = 0; o < kOutcomeCount; ++o) {
      const double freq = static_cast<double>(counts[o]) / n;
      const double sigma = std::sqrt(std::max(p[o] * (1.0 - p[o]), 1e-300) / n);
      CHECK_MESSAGE(std::abs(freq - p[o]) <= 3.0 * sigma + 1e-12, "k=", k, " outcome=", o);
    }
  }
}

TEST_CASE("Bob's measurement") {
  Rng rng(8);
  const BobMeasurement same = simulate_bob(0, Basis::z, Basis::z, rng);
  REQUIRE(same.bit);
  CHECK(*same.bit == 0);
  CHECK(same.sifted);
  CHECK(*simulate_bob(2, Basis::z, Basis::z, rng).bit == 1);
  CHECK(*simulate_bob(3, Basis::x, Basis::x, rng).bit == 1);

  const BobMeasurement blocked = simulate_bob(std::nullopt, Basis::z, Basis::z, rng);
  CHECK_FALSE(blocked.bit);
  CHECK_FALSE(blocked.sifted);

  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const BobMeasurement m = simulate_bob(0, Basis::x, Basis::z, rng);
    CHECK_FALSE(m.sifted);
    ones += *m.bit;
  }
  CHECK(within_3_sigma(static_cast<double>(ones) / n, 0.5, std::sqrt(0.25 / n)));
  CHECK_THROWS_AS(simulate_bob(5, Basis::z, Basis::z, rng), DomainError);
}

TEST_CASE("trial records respect their invariants") {
  const AttackEnsemble ens = build_bb84_ensemble(kPi / 4.0);
  const PovmStrategy strat = build_phase_remapping_povm(kPi / 4.0);
  const TrialSimulator sim(ens, strat);
  Rng rng(12);
  for (int i = 0; i < 100000; ++i) {
    const TrialRecord r = sim.run(rng);
    if (r.error) CHECK(r.sifted);
    if (r.sifted) CHECK(r.eve_outcome != Outcome::vac);
    CHECK(r.bob_bit.has_value() == (r.eve_outcome != Outcome::vac));
  }
}

TEST_CASE("full pipeline at epsilon = 1 degree, delta = pi/2") {
  const Analysis a = analyze(AttackKind::pfm, deg(1.0), kPi / 2.0);
  const OracleEstimate est = run_oracle(a.ensemble, a.strategy, 10'000'000, 1);
  CHECK(within_3_sigma(est.e_B_hat, a.report.e_B, est.stderr_e));
  CHECK(within_3_sigma(est.p_succ_hat, a.report.p_succ, est.stderr_p));
  CHECK(within_3_sigma(est.p_succ_hat, 2.43e-3, est.stderr_p));
  // Bob's basis is uniform, so half the conclusive pulses survive sifting.
  const double conclusive = static_cast<double>(est.conclusive);
  CHECK(within_3_sigma(static_cast<double>(est.sifted) / conclusive, 0.5, std::sqrt(0.25 / conclusive)));
}

TEST_CASE("phase-remapping strategy through the oracle") {
  const Analysis a = analyze(AttackKind::phase_remapping, 0.0, kPi / 4.0);
  const OracleEstimate est = run_oracle(a.ensemble, a.strategy, 10'000'000, 2);
  CHECK(within_3_sigma(est.e_B_hat, 0.177, est.stderr_e));
  CHECK(within_3_sigma(est.e_B_hat, a.report.e_B, est.stderr_e));
  CHECK(within_3_sigma(est.p_succ_hat, a.report.p_succ, est.stderr_p));
}

TEST_CASE("oracle agrees with the closed form on a 3x3 grid") {
  std::uint64_t seed = 100;
  for (double e : {0.5, 0.75, 1.0}) {
    for (double d : {kPi / 4.0, kPi / 3.0, kPi / 2.0}) {
      const Analysis a = analyze(AttackKind::pfm, deg(e), d);
      const OracleEstimate est = run_oracle(a.ensemble, a.strategy, 10'000'000, seed++);
      CHECK_MESSAGE(within_3_sigma(est.e_B_hat, a.report.e_B, est.stderr_e), "eps=", e, " delta=", d);
      CHECK_MESSAGE(within_3_sigma(est.p_succ_hat, a.report.p_succ, est.stderr_p), "eps=", e, " delta=", d);
    }
  }
}

TEST_CASE("standard intercept-resend gives a quarter QBER") {
  const OracleEstimate est = run_oracle(build_bb84_ensemble(kPi / 2.0), build_intercept_resend_povm(), 1'000'000, 9);
  CHECK(within_3_sigma(est.e_B_hat, general_intercept_resend_qber(), est.stderr_e));
  CHECK(est.p_succ_hat == 1.0);
}

TEST_CASE("determinism and argument checks") {
  const Analysis a = analyze(AttackKind::pfm, deg(0.8), kPi / 3.0);
  const OracleEstimate first = run_oracle(a.ensemble, a.strategy, 200000, 77);
  const OracleEstimate second = run_oracle(a.ensemble, a.strategy, 200000, 77);
  const OracleEstimate other = run_oracle(a.ensemble, a.strategy, 200000, 78);
  CHECK(first == second);
  CHECK(first.rng_seed == 77);
  CHECK_FALSE(first == other);
  CHECK_THROWS_AS(run_oracle(a.ensemble, a.strategy, 1000, 1), DomainError);
}

}  // TEST_SUITE
