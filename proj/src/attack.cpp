#include "pfm/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pfm/errors.hpp"

namespace pfm {

namespace {

constexpr double kProbabilitySlack = 1e-9;

struct PairDiscrimination {
  ComplexMatrix m0;
  ComplexMatrix m3;
  double x;
  double lambda_0;
  double lambda_3;
};

struct MinimalEigenpair {
  double value;
  ComplexVector vector;
};

MinimalEigenpair minimal_nonzero_eigenpair(const ComplexMatrix& op, double rank_tol) {
  const EigenDecomposition eig = hermitian_eig(op);
  const double cut = rank_tol * eig.max_eigenvalue();
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > cut) return {eig.eigenvalues[i], eig.eigenvectors[i]};
  }
  throw DegenerateSpan("conjugated error operator has no nonzero eigenvalue");
}

PairDiscrimination discriminate_pair(const AttackEnsemble& ens, double rank_tol) {
  const ComplexMatrix inv_sqrt = pinv_sqrt(ens.rho, rank_tol);
  std::array<ComplexMatrix, 2> a;
  std::array<double, 2> lambda{};
  const std::array<std::size_t, 2> targets{0, 3};
  for (std::size_t j = 0; j < 2; ++j) {
    const ComplexMatrix conjugated = hermitian_part(inv_sqrt * ens.L[targets[j]] * inv_sqrt);
    const MinimalEigenpair pair = minimal_nonzero_eigenpair(conjugated, rank_tol);
    lambda[j] = pair.value;
    const ComplexVector lifted = inv_sqrt * pair.vector;
    a[j] = outer(lifted, lifted);
  }
  // I - x (A_0 + A_3) >= 0  iff  x <= 1 / lambda_max(A_0 + A_3).
  const double x = 1.0 / max_eigenvalue(hermitian_part(a[0] + a[1]));
  return {x * a[0], x * a[1], x, lambda[0], lambda[1]};
}

PovmStrategy assemble(StrategyKind kind, const PairDiscrimination& pair) {
  const std::size_t n = pair.m0.rows();
  PovmStrategy strat;
  strat.kind = kind;
  strat.conclusive = {pair.m0, ComplexMatrix::zeros(n, n), ComplexMatrix::zeros(n, n), pair.m3};
  strat.vacuum = hermitian_part(ComplexMatrix::identity(n) - pair.m0 - pair.m3);
  strat.x = pair.x;
  strat.lambda_0 = pair.lambda_0;
  strat.lambda_3 = pair.lambda_3;
  return strat;
}

double checked_probability(double p, const char* what) {
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    std::ostringstream msg;
    msg << what << " = " << p << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::pfm_suboptimal_3d:
      return "pfm_suboptimal_3d";
    case StrategyKind::phase_remapping_2d:
      return "phase_remapping_2d";
    case StrategyKind::intercept_resend_2d:
      return "intercept_resend_2d";
  }
  return "unknown";
}

const ComplexMatrix& PovmStrategy::op(Outcome o) const {
  if (o == Outcome::vac) return vacuum;
  return conclusive[static_cast<std::size_t>(o)];
}

std::optional<int> PovmStrategy::resend(Outcome o) {
  if (o == Outcome::vac) return std::nullopt;
  return static_cast<int>(o);
}

PovmCheck check_povm(const PovmStrategy& strat) {
  const std::size_t n = strat.dim();
  PovmCheck check;
  check.vacuum_min_eigenvalue = min_eigenvalue(strat.vacuum);
  check.min_eigenvalue = check.vacuum_min_eigenvalue;
  ComplexMatrix total = strat.vacuum;
  for (const auto& m : strat.conclusive) {
    check.min_eigenvalue = std::min(check.min_eigenvalue, min_eigenvalue(m));
    total += m;
  }
  check.completeness_residual = frobenius_norm(total - ComplexMatrix::identity(n));
  return check;
}

PovmStrategy build_suboptimal_povm(const AttackEnsemble& ens, double rank_tol) {
  if (ens.dim() != 3) throw DimensionMismatch("build_suboptimal_povm: ensemble must be 3-dimensional");
  if (ens.epsilon == 0.0) {
    throw SingularEpsilon("epsilon = 0 is a singular point: the states span only two dimensions");
  }
  const std::size_t rank = span_dimension(ens, rank_tol);
  if (rank < 3) {
    std::ostringstream msg;
    msg << "rho has numerical rank " << rank << " < 3";
    throw DegenerateSpan(msg.str());
  }
  return assemble(StrategyKind::pfm_suboptimal_3d, discriminate_pair(ens, rank_tol));
}

PovmStrategy build_phase_remapping_povm(double delta, double rank_tol) {
  if (!(delta > 0.0 && delta <= std::numbers::pi / 2.0)) {
    throw DomainError("phase remapping: delta must lie in (0, pi/2]");
  }
  const AttackEnsemble ens = build_bb84_ensemble(delta);
  if (span_dimension(ens, rank_tol) < 2) throw DegenerateSpan("phase remapping: rho is rank deficient");
  return assemble(StrategyKind::phase_remapping_2d, discriminate_pair(ens, rank_tol));
}

PovmStrategy build_intercept_resend_povm() {
  PovmStrategy strat;
  strat.kind = StrategyKind::intercept_resend_2d;
  for (int i = 0; i < 4; ++i) {
    const ComplexVector phi = bb84_state(i, std::numbers::pi / 2.0).vector;
    strat.conclusive[static_cast<std::size_t>(i)] = hermitian_part(0.5 * outer(phi, phi));
  }
  ComplexMatrix rest = ComplexMatrix::identity(2);
  for (const auto& m : strat.conclusive) rest -= m;
  strat.vacuum = hermitian_part(rest);
  strat.x = 1.0;
  return strat;
}

AttackReport evaluate(const AttackEnsemble& ens, const PovmStrategy& strat) {
  if (ens.dim() != strat.dim()) {
    std::ostringstream msg;
    msg << "evaluate: ensemble dimension " << ens.dim() << " vs strategy dimension " << strat.dim();
    throw DimensionMismatch(msg.str());
  }
  double errors = 0.0;
  double conclusive = 0.0;
  AttackReport report;
  for (std::size_t i = 0; i < 4; ++i) {
    errors += real_trace(strat.conclusive[i] * ens.L[i]);
    const double weight = real_trace(strat.conclusive[i] * ens.rho);
    conclusive += weight;
    report.outcome_probability[i] = weight / 4.0;
  }
  report.outcome_probability[static_cast<std::size_t>(Outcome::vac)] = real_trace(strat.vacuum * ens.rho) / 4.0;
  if (!(conclusive > 0.0)) throw DomainError("evaluate: strategy never yields a conclusive outcome");

  report.epsilon = ens.epsilon;
  report.delta = ens.delta;
  report.e_B = checked_probability(errors / conclusive, "e_B");
  report.p_succ = checked_probability(conclusive / 4.0, "p_succ");
  report.lambda_0 = strat.lambda_0;
  report.lambda_3 = strat.lambda_3;
  report.x = strat.x;
  report.max_fiber_km = fiber_length_for_transmittance(report.p_succ);
  return report;
}

double general_intercept_resend_qber() { return kGeneralInterceptResendQber; }

double transmittance_for_length(double km, double loss_db_per_km) {
  return std::pow(10.0, -loss_db_per_km * km / 10.0);
}

double fiber_length_for_transmittance(double transmittance, double loss_db_per_km) {
  return -10.0 * std::log10(transmittance) / loss_db_per_km;
}

Analysis analyze(AttackKind kind, double epsilon, double delta, double rank_tol) {
  Analysis out;
  if (kind == AttackKind::pfm) {
    out.ensemble = build_ensemble(epsilon, delta);
    out.strategy = build_suboptimal_povm(out.ensemble, rank_tol);
  } else {
    out.strategy = build_phase_remapping_povm(delta, rank_tol);
    out.ensemble = build_bb84_ensemble(delta);
  }
  out.report = evaluate(out.ensemble, out.strategy);
  return out;
}

}  // namespace pfm
