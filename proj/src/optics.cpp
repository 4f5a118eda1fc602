#include "pfm/optics.hpp"

#include <cmath>
#include <sstream>

#include "pfm/errors.hpp"

namespace pfm {

namespace {

constexpr complex kI{0.0, 1.0};

void check_round_trip_args(const ProbeState& probe, int k, double delta) {
  if (probe.alpha() != complex{1.0, 0.0} || probe.beta() != complex{0.0, 0.0}) {
    throw UnsupportedProbe("round_trip: only the probe alpha=1, beta=0 is modelled");
  }
  if (k < 0 || k > 3) throw DomainError("round_trip: k must be in 0..3");
  if (!(delta >= 0.0 && delta <= std::numbers::pi / 2.0)) {
    throw DomainError("round_trip: delta must lie in [0, pi/2]");
  }
}

}  // namespace

FaradayMirror::FaradayMirror(double epsilon) : epsilon_(epsilon) {
  if (!(std::abs(epsilon) <= kMaxMirrorDeviation)) {
    std::ostringstream msg;
    msg << "FaradayMirror: |epsilon| = " << std::abs(epsilon) << " rad exceeds " << kMaxMirrorDeviation;
    throw DomainError(msg.str());
  }
}

ProbeState::ProbeState(complex alpha, complex beta) : alpha_(alpha), beta_(beta) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > 1e-12) throw DomainError("ProbeState: |alpha|^2 + |beta|^2 must be 1");
}

ComplexMatrix fm_matrix_closed_form(double epsilon) {
  const double s = std::sin(2.0 * epsilon);
  const double c = std::cos(2.0 * epsilon);
  return {{-s, -c}, {-c, s}};
}

ComplexMatrix fm_matrix(const FaradayMirror& fm) { return fm_matrix_closed_form(fm.epsilon()); }

ComplexMatrix rotation_matrix(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{c, -s}, {s, c}};
}

ComplexMatrix fm_matrix_from_rotator(double theta) {
  const ComplexMatrix mirror{{1.0, 0.0}, {0.0, -1.0}};
  return rotation_matrix(-theta) * mirror * rotation_matrix(theta);
}

ComplexMatrix ideal_fm_matrix() { return {{0.0, -1.0}, {-1.0, 0.0}}; }

ComplexMatrix channel_matrix(const BirefringentChannel& ch, Direction direction) {
  const double sign = direction == Direction::forward ? 1.0 : -1.0;
  const ComplexMatrix phases{{std::exp(kI * ch.phi_o), 0.0}, {0.0, std::exp(kI * ch.phi_e)}};
  return rotation_matrix(sign * ch.theta_prime) * phases * rotation_matrix(-sign * ch.theta_prime);
}

double compensation_residual(const BirefringentChannel& ch, const ComplexMatrix& mirror) {
  const ComplexMatrix round = channel_matrix(ch, Direction::backward) * mirror * channel_matrix(ch, Direction::forward);
  return frobenius_norm(round - std::exp(kI * (ch.phi_o + ch.phi_e)) * mirror);
}

double verify_compensation(const BirefringentChannel& ch) { return compensation_residual(ch, ideal_fm_matrix()); }

ComplexMatrix phase_modulator(double phase) { return {{std::exp(kI * phase), 0.0}, {0.0, 1.0}}; }

RoundTripOutput round_trip(const FaradayMirror& fm, const ProbeState& probe, int k, double delta) {
  check_round_trip_args(probe, k, delta);
  const double s = std::sin(2.0 * fm.epsilon());
  const double c = std::cos(2.0 * fm.epsilon());
  const complex phase = std::exp(kI * (k * delta));
  return {
      ComplexVector{-phase * s * phase, -phase * c},
      ComplexVector{-s, -c},
  };
}

RoundTripOutput round_trip_by_matrices(const FaradayMirror& fm, const ProbeState& probe, int k, double delta) {
  check_round_trip_args(probe, k, delta);
  const ComplexMatrix pm = phase_modulator(k * delta);
  const ComplexMatrix mirror = fm_matrix(fm);
  const ComplexVector in = probe.vector();
  return {pm * mirror * pm * in, mirror * in};
}

}  // namespace pfm
