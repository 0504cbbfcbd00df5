import numpy as np
import pytest

from quditsteer.qmath import (
    eig_max_hermitian,
    is_psd,
    ket,
    kron,
    partial_trace,
    projector,
)
from quditsteer.scenario import max_entangled


def random_hermitian(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (m + m.conj().T) / 2


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_kron_identities():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    p01 = kron(projector([1, 0]), projector([0, 1]))
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0
    assert np.allclose(p01, expected)


def test_kron_trace_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = random_hermitian(rng, 3)
        b = random_hermitian(rng, 3)
        assert abs(np.trace(kron(a, b)) - np.trace(a) * np.trace(b)) < 1e-12


def test_kron_mixed_product():
    rng = np.random.default_rng(12)
    a, b, c, d = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4))
    assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12)


def test_partial_trace_product_state():
    rng = np.random.default_rng(13)
    rho_a = random_density(rng, 3)
    rho_b = random_density(rng, 4)
    joint = kron(rho_a, rho_b)
    assert np.abs(partial_trace(joint, [3, 4], keep=0) - rho_a).max() < 1e-12
    assert np.abs(partial_trace(joint, [3, 4], keep=1) - rho_b).max() < 1e-12


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(14)
    m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    for keep in (0, 1):
        reduced = partial_trace(m, [3, 4], keep=keep)
        assert abs(np.trace(reduced) - np.trace(m)) < 1e-12


def test_partial_trace_bell_reduction():
    # Tr_C[(I (x) tau^T) |Phi_d><Phi_d|] = tau / d, the key MDI identity
    rng = np.random.default_rng(15)
    for d in (2, 3, 4):
        tau = random_density(rng, d)
        phi = projector(max_entangled(d))
        op = kron(np.eye(d), tau.T) @ phi
        assert np.abs(partial_trace(op, [d, d], keep=0) - tau / d).max() < 1e-12


def test_partial_trace_three_subsystems():
    rng = np.random.default_rng(16)
    parts = [random_density(rng, d) for d in (2, 3, 2)]
    joint = kron(kron(parts[0], parts[1]), parts[2])
    for keep, d in enumerate((2, 3, 2)):
        reduced = partial_trace(joint, [2, 3, 2], keep=keep)
        assert np.abs(reduced - parts[keep]).max() < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_trace(np.eye(6), [2, 2], keep=0)


def test_eig_max_trivial():
    assert abs(eig_max_hermitian(np.eye(4)) - 1.0) < 1e-12
    assert abs(eig_max_hermitian(np.diag([0.2, 0.5, 0.3])) - 0.5) < 1e-12


def test_eig_max_two_projector_sum():
    # lambda_max(P_u + P_v) = 1 + |<u|v>| -- the step behind the LHS bound
    rng = np.random.default_rng(17)
    for _ in range(20):
        u = ket(rng.normal(size=3) + 1j * rng.normal(size=3))
        v = ket(rng.normal(size=3) + 1j * rng.normal(size=3))
        lam = eig_max_hermitian(projector(u) + projector(v))
        assert abs(lam - (1 + abs(np.vdot(u, v)))) < 1e-10


def test_eig_max_agrees_with_general_eigensolver():
    rng = np.random.default_rng(18)
    for _ in range(100):
        d = rng.integers(2, 17)
        h = random_hermitian(rng, d)
        oracle = np.linalg.eigvals(h).real.max()
        assert abs(eig_max_hermitian(h) - oracle) < 1e-10


def test_eig_max_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_max_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_is_psd():
    assert is_psd(np.eye(3))
    assert not is_psd(np.diag([1.0, -0.01]), tol=1e-9)
    rng = np.random.default_rng(19)
    for _ in range(10):
        assert is_psd(random_density(rng, 4), tol=1e-12)


def test_kron_partial_trace_roundtrip():
    rng = np.random.default_rng(20)
    a = random_hermitian(rng, 3)
    b = random_hermitian(rng, 2)
    joint = kron(a, b)
    assert np.abs(partial_trace(joint, [3, 2], keep=0) - np.trace(b) * a).max() < 1e-12
    assert np.abs(partial_trace(joint, [3, 2], keep=1) - np.trace(a) * b).max() < 1e-12
