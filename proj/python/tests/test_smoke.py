import math

import numpy as np
import pytest

import pfm_attack as pa


def test_headline_numbers():
    r = pa.analyze_deg("pfm", 1.0, math.pi / 2)
    assert r["e_B"] == pytest.approx((1 - math.sqrt(2) / 2) / 2, rel=1e-9)
    assert r["p_succ"] == pytest.approx(2.43298e-3, rel=1e-4)
    assert r["max_fiber_km"] == pytest.approx(pa.fiber_length_for_transmittance(r["p_succ"]))
    remap = pa.analyze("remap", 0.0, math.pi / 4)
    assert remap["e_B"] == pytest.approx(0.17701552957878863, rel=1e-9)


def test_ensemble_is_three_dimensional():
    ens = pa.build_ensemble(math.radians(0.5), math.pi / 4)
    assert ens.dim == 3
    assert pa.span_dimension(ens) == 3
    assert np.trace(ens.rho).real == pytest.approx(4.0)
    assert len(ens.states) == 4 and len(ens.L) == 4
    assert pa.span_dimension(pa.build_ensemble(0.0, math.pi / 4)) == 2


def test_povm_is_valid():
    ens = pa.build_ensemble(math.radians(1.0), math.pi / 3)
    povm = pa.build_suboptimal_povm(ens)
    total = sum(povm.conclusive) + povm.vacuum
    assert np.allclose(total, np.eye(3), atol=1e-12)
    check = pa.check_povm(povm)
    assert check["min_eigenvalue"] > -1e-9
    rep = pa.evaluate(ens, povm)
    assert rep["p_succ"] == pytest.approx(povm.x / 2)


def test_eigensolver_matches_numpy():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = a + a.conj().T
    vals, vecs = pa.hermitian_eig(h)
    assert np.allclose(vals, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, h, atol=1e-12)


def test_optics():
    assert pa.verify_compensation(0.7, 1.1, 2.3) < 1e-12
    assert pa.compensation_residual(0.7, 1.1, 2.3, math.radians(1.0)) == pytest.approx(0.05573624426363207, rel=1e-9)
    fm = pa.fm_matrix(0.0)
    assert np.allclose(fm, [[0, -1], [-1, 0]])
    out_c, out_d = pa.round_trip(math.radians(1.0), 1, math.pi / 2)
    assert out_c.shape == (2,) and out_d.shape == (2,)


def test_oracle_is_reproducible():
    ens = pa.build_ensemble(math.radians(1.0), math.pi / 2)
    povm = pa.build_suboptimal_povm(ens)
    a = pa.run_oracle(ens, povm, 200_000, seed=7)
    b = pa.run_oracle(ens, povm, 200_000, seed=7)
    assert a == b
    assert abs(a["p_succ_hat"] - povm.x / 2) < 5 * a["stderr_p"]


def test_errors():
    with pytest.raises(pa.SingularEpsilon):
        pa.build_suboptimal_povm(pa.build_ensemble(0.0, math.pi / 2))
    with pytest.raises(ValueError):
        pa.analyze("pfm", 0.0, math.pi / 2)
    with pytest.raises(ValueError):
        pa.fm_matrix(1.0)
    with pytest.raises(pa.DomainError):
        pa.run_oracle(pa.build_bb84_ensemble(math.pi / 2), pa.build_intercept_resend_povm(), 10)
    with pytest.raises(pa.NonHermitian):
        pa.hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))
