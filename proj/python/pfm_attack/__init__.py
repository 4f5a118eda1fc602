"""Passive Faraday-mirror attack simulator for plug-and-play QKD.

Matrices come back as complex numpy arrays; reports and oracle estimates as dicts.
"""

from ._core import (
    AttackEnsemble,
    DegenerateSpan,
    DimensionMismatch,
    DomainError,
    FIBER_LOSS_DB_PER_KM,
    MAX_MIRROR_DEVIATION,
    MIN_ORACLE_TRIALS,
    NegativeEigenvalue,
    NegativeProbability,
    NoConvergence,
    NonHermitian,
    PfmError,
    PovmStrategy,
    SingularEpsilon,
    UnsupportedProbe,
    __version__,
    analyze,
    build_bb84_ensemble,
    build_ensemble,
    build_intercept_resend_povm,
    build_phase_remapping_povm,
    build_suboptimal_povm,
    channel_matrix,
    check_povm,
    compensation_residual,
    evaluate,
    fiber_length_for_transmittance,
    fm_matrix,
    general_intercept_resend_qber,
    hermitian_eig,
    numerical_rank,
    pinv_sqrt,
    round_trip,
    run_oracle,
    span_dimension,
    transmittance_for_length,
    verify_compensation,
)

from math import radians as _radians


def analyze_deg(kind, epsilon_deg, delta):
    """analyze() with the mirror deviation given in degrees."""
    return analyze(kind, _radians(epsilon_deg), delta)
