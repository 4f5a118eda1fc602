#pragma once

// The four states Alice returns under the probe, written in the
// 3-dimensional basis e0 = |cH'>, e1 = |cV'>, e2 = |dV'>, plus the derived
// density and error operators. The same container holds the 2-dimensional
// standard BB84 ensemble in the {|c>, |d>} basis.

#include <array>
#include <cstddef>

#include "pfm/numkernel.hpp"

namespace pfm {

struct AttackEnsemble {
  double epsilon = 0.0;
  double delta = 0.0;
  std::array<ComplexVector, 4> states;
  std::array<ComplexMatrix, 4> rho_k;
  ComplexMatrix rho;                // sum of rho_k, trace 4
  std::array<ComplexMatrix, 4> L;   // L_i = rho_{i+1}/2 + rho_{i+2} + rho_{i+3}/2 (indices mod 4)

  std::size_t dim() const { return rho.rows(); }
};

struct Bb84State {
  int k = 0;
  double delta = 0.0;
  ComplexVector vector;  // (e^{i k delta}|c> + |d>) / sqrt(2)
};

// Assembles rho_k, rho and L_i from four unit state vectors.
AttackEnsemble ensemble_from_states(double epsilon, double delta, std::array<ComplexVector, 4> states);

// Throws DomainError unless |epsilon| <= pi/36 and delta in [0, pi/2].
AttackEnsemble build_ensemble(double epsilon, double delta);

Bb84State bb84_state(int k, double delta);
// Standard ensemble {|phi_k(delta)>}; epsilon recorded as 0.
AttackEnsemble build_bb84_ensemble(double delta);

// Numerical rank of rho: eigenvalues above tol * lambda_max.
std::size_t span_dimension(const AttackEnsemble& ens, double tol = kDefaultRankTol);

}  // namespace pfm
