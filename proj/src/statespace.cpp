#include "pfm/statespace.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pfm/errors.hpp"
#include "pfm/optics.hpp"

namespace pfm {

namespace {

constexpr complex kI{0.0, 1.0};

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta <= std::numbers::pi / 2.0)) {
    std::ostringstream msg;
    msg << "delta = " << delta << " outside [0, pi/2]";
    throw DomainError(msg.str());
  }
}

}  // namespace

AttackEnsemble ensemble_from_states(double epsilon, double delta, std::array<ComplexVector, 4> states) {
  AttackEnsemble ens;
  ens.epsilon = epsilon;
  ens.delta = delta;
  const std::size_t n = states[0].dim();
  for (const auto& s : states) {
    if (s.dim() != n) throw DimensionMismatch("ensemble_from_states: state dimensions differ");
  }
  ens.states = std::move(states);
  ens.rho = ComplexMatrix::zeros(n, n);
  for (std::size_t k = 0; k < 4; ++k) {
    ens.rho_k[k] = outer(ens.states[k], ens.states[k]);
    ens.rho += ens.rho_k[k];
  }
  for (std::size_t i = 0; i < 4; ++i) {
    ens.L[i] = 0.5 * ens.rho_k[(i + 1) % 4] + ens.rho_k[(i + 2) % 4] + 0.5 * ens.rho_k[(i + 3) % 4];
  }
  return ens;
}

AttackEnsemble build_ensemble(double epsilon, double delta) {
  if (!(std::abs(epsilon) <= kMaxMirrorDeviation)) {
    std::ostringstream msg;
    msg << "epsilon = " << epsilon << " rad outside [-pi/36, pi/36]";
    throw DomainError(msg.str());
  }
  check_delta(delta);
  const double s = std::sin(2.0 * epsilon);
  const double c = std::cos(2.0 * epsilon);
  const double norm = 1.0 / std::numbers::sqrt2;
  std::array<ComplexVector, 4> states;
  for (int k = 0; k < 4; ++k) {
    const complex once = std::exp(kI * (k * delta));
    const complex twice = std::exp(kI * (2.0 * k * delta));
    states[k] = ComplexVector{
        norm * s * c * (twice - once),
        norm * (s * s * twice + c * c * once),
        norm,
    };
  }
  return ensemble_from_states(epsilon, delta, std::move(states));
}

Bb84State bb84_state(int k, double delta) {
  if (k < 0 || k > 3) throw DomainError("bb84_state: k must be in 0..3");
  const double norm = 1.0 / std::numbers::sqrt2;
  return {k, delta, ComplexVector{norm * std::exp(kI * (k * delta)), norm}};
}

AttackEnsemble build_bb84_ensemble(double delta) {
  check_delta(delta);
  std::array<ComplexVector, 4> states;
  for (int k = 0; k < 4; ++k) states[k] = bb84_state(k, delta).vector;
  return ensemble_from_states(0.0, delta, std::move(states));
}

std::size_t span_dimension(const AttackEnsemble& ens, double tol) { return numerical_rank(ens.rho, tol); }

}  // namespace pfm
