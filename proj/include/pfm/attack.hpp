#pragma once

// Eve's intercept-and-resend POVM strategies and the QBER / success
// probability they induce.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>

#include "pfm/numkernel.hpp"
#include "pfm/statespace.hpp"

namespace pfm {

inline constexpr double kFiberLossDbPerKm = 0.21;
inline constexpr double kGeneralInterceptResendQber = 0.25;
// Reference thresholds: collective attack with one-way post-processing, and
// BB84 with two-way post-processing.
inline constexpr double kCollectiveAttackQberLimit = 0.11;
inline constexpr double kTwoWayPostProcessingQberLimit = 0.20;

enum class StrategyKind {
  pfm_suboptimal_3d,
  phase_remapping_2d,
  intercept_resend_2d,
};

std::string_view to_string(StrategyKind kind);

// Eve's measurement outcomes. m0..m3 resend the matching standard BB84 state,
// vac blocks the pulse.
enum class Outcome : int { m0 = 0, m1 = 1, m2 = 2, m3 = 3, vac = 4 };
inline constexpr std::size_t kOutcomeCount = 5;

struct PovmStrategy {
  StrategyKind kind = StrategyKind::pfm_suboptimal_3d;
  std::array<ComplexMatrix, 4> conclusive;  // M_0..M_3; M_1 = M_2 = 0 for the pair-discrimination kinds
  ComplexMatrix vacuum;                     // I - sum of conclusive operators
  double x = std::numeric_limits<double>::quiet_NaN();
  // Minimal nonzero eigenvalues of rho^{-1/2} L_b rho^{-1/2}, b = 0, 3.
  double lambda_0 = std::numeric_limits<double>::quiet_NaN();
  double lambda_3 = std::numeric_limits<double>::quiet_NaN();

  const ComplexMatrix& op(Outcome o) const;
  std::size_t dim() const { return vacuum.rows(); }
  // BB84 index Eve resends for outcome o; nullopt means the pulse is blocked.
  static std::optional<int> resend(Outcome o);
};

struct PovmCheck {
  double min_eigenvalue = 0.0;          // smallest eigenvalue over all operators
  double vacuum_min_eigenvalue = 0.0;
  double completeness_residual = 0.0;   // ||sum M - I||_F
};

PovmCheck check_povm(const PovmStrategy& strat);

struct AttackReport {
  double epsilon = 0.0;
  double delta = 0.0;
  double e_B = 0.0;
  double p_succ = 0.0;
  double lambda_0 = 0.0;
  double lambda_3 = 0.0;
  double x = 0.0;
  double max_fiber_km = 0.0;
  // Average over Alice's uniform choice of Tr(M_o rho_k), indexed by Outcome.
  std::array<double, kOutcomeCount> outcome_probability{};
};

// 3-D suboptimal strategy: distinguish rho_0 and rho_3 from the rest with
// M_b = x rho^{-1/2}|C_b><C_b|rho^{-1/2}, x as large as M_vac >= 0 allows.
// Throws SingularEpsilon at epsilon == 0 and DegenerateSpan if rank(rho) < 3.
PovmStrategy build_suboptimal_povm(const AttackEnsemble& ens, double rank_tol = kDefaultRankTol);

// Same construction on the 2-D standard ensemble {|phi_k(delta)>}.
// Throws DomainError unless delta in (0, pi/2].
PovmStrategy build_phase_remapping_povm(double delta, double rank_tol = kDefaultRankTol);

// Standard intercept-resend on BB84 states at delta = pi/2: random basis
// measurement, M_i = |phi_i><phi_i| / 2, no blocking.
PovmStrategy build_intercept_resend_povm();

AttackReport evaluate(const AttackEnsemble& ens, const PovmStrategy& strat);

double general_intercept_resend_qber();

double transmittance_for_length(double km, double loss_db_per_km = kFiberLossDbPerKm);
double fiber_length_for_transmittance(double transmittance, double loss_db_per_km = kFiberLossDbPerKm);

enum class AttackKind { pfm, phase_remapping };

struct Analysis {
  AttackEnsemble ensemble;
  PovmStrategy strategy;
  AttackReport report;
};

// Builds the ensemble and strategy for one parameter point and evaluates it.
// epsilon is ignored for phase_remapping.
Analysis analyze(AttackKind kind, double epsilon, double delta, double rank_tol = kDefaultRankTol);

}  // namespace pfm
