#pragma once

// Jones-calculus model of Alice's side of a plug-and-play round trip.

#include <numbers>

#include "pfm/numkernel.hpp"

namespace pfm {

// Largest |epsilon| accepted by FaradayMirror (5 degrees).
inline constexpr double kMaxMirrorDeviation = std::numbers::pi / 36.0;

// Faraday mirror whose rotator angle is pi/4 + epsilon.
class FaradayMirror {
 public:
  FaradayMirror() = default;
  explicit FaradayMirror(double epsilon);

  double epsilon() const { return epsilon_; }

 private:
  double epsilon_ = 0.0;
};

struct BirefringentChannel {
  double theta_prime = 0.0;  // reference basis vs eigenmode basis
  double phi_o = 0.0;        // ordinary ray phase
  double phi_e = 0.0;        // extraordinary ray phase
};

enum class Direction { forward, backward };

class ProbeState {
 public:
  ProbeState() = default;
  ProbeState(complex alpha, complex beta);

  complex alpha() const { return alpha_; }
  complex beta() const { return beta_; }
  ComplexVector vector() const { return {alpha_, beta_}; }

 private:
  complex alpha_ = 1.0;
  complex beta_ = 0.0;
};

struct RoundTripOutput {
  ComplexVector out_c;
  ComplexVector out_d;
};

// -[[sin 2e, cos 2e], [cos 2e, -sin 2e]]. No range check, so e = pi/4 etc. can be evaluated.
ComplexMatrix fm_matrix_closed_form(double epsilon);
ComplexMatrix fm_matrix(const FaradayMirror& fm);
// rotator(theta)^T-style sandwich around the mirror diag(1, -1), theta = rotator angle.
ComplexMatrix fm_matrix_from_rotator(double theta);
// Ideal 45 degree mirror, -[[0, 1], [1, 0]].
ComplexMatrix ideal_fm_matrix();

ComplexMatrix rotation_matrix(double angle);
ComplexMatrix channel_matrix(const BirefringentChannel& ch, Direction direction);

// || T(-theta') FM T(theta') - e^{i(phi_o + phi_e)} FM ||_F with the given mirror.
double compensation_residual(const BirefringentChannel& ch, const ComplexMatrix& mirror);
// Residual for the ideal mirror; vanishes for every channel.
double verify_compensation(const BirefringentChannel& ch);

// diag(e^{i phase}, 1): only the H component picks up Alice's phase.
ComplexMatrix phase_modulator(double phase);

// Closed-form output Jones vectors of the two time modes; only mode c is
// modulated with phase k*delta. Requires the default probe (1, 0).
RoundTripOutput round_trip(const FaradayMirror& fm, const ProbeState& probe, int k, double delta);
// Same quantity from PM(k delta) * FM * PM(k delta) * in and FM * in.
RoundTripOutput round_trip_by_matrices(const FaradayMirror& fm, const ProbeState& probe, int k, double delta);

}  // namespace pfm
