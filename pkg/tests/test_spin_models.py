import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_anisotropic_params, random_symmetric_params
from zenon.errors import SiteOutOfRangeError, ValidationError
from zenon.linalg import commutator, frobenius_norm, is_hermitian
from zenon.spin_models import (
    SIGMA,
    AnisotropicParams,
    SymmetricParams,
    build_anisotropic,
    build_symmetric,
    pauli,
)


def test_pauli_single_qubit():
    assert np.allclose(pauli("z", 1, 1), np.diag([1, -1]))
    assert np.allclose(pauli("x", 1, 1) @ pauli("y", 1, 1), 1j * pauli("z", 1, 1))


def test_pauli_embedding_order():
    # site 1 is the most significant factor
    assert np.allclose(pauli("z", 1, 2), np.diag([1, 1, -1, -1]))
    assert np.allclose(pauli("z", 2, 2), np.diag([1, -1, 1, -1]))


@given(st.sampled_from("xyz"), st.integers(1, 3))
def test_pauli_matches_manual_kron(axis, site):
    ops = [SIGMA[axis] if k == site else np.eye(2) for k in (1, 2, 3)]
    manual = np.kron(np.kron(ops[0], ops[1]), ops[2])
    assert np.array_equal(pauli(axis, site, 3), manual)


def test_pauli_validation():
    with pytest.raises(SiteOutOfRangeError):
        pauli("x", 4, 3)
    with pytest.raises(SiteOutOfRangeError):
        pauli("x", 0, 3)
    with pytest.raises(ValidationError):
        pauli("w", 1, 3)


def test_params_reject_non_finite():
    with pytest.raises(ValidationError):
        SymmetricParams(gamma_xy=float("nan"), gamma_z=0, g_xy=0, g_z=0)
    with pytest.raises(ValidationError):
        AnisotropicParams(1, 2, float("inf"), 0, 0, 0, 0, 0, 0)


def test_build_symmetric_zero_params():
    p = SymmetricParams(0.0, 0.0, 0.0, 0.0)
    assert np.array_equal(build_symmetric(p), np.zeros((8, 8)))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_build_symmetric_diagonal_entry(seed):
    p = random_symmetric_params(np.random.Generator(np.random.PCG64(seed)))
    h = build_symmetric(p)
    # <000|H|000>: all three zz bonds aligned
    assert h[0, 0] == pytest.approx(p.gamma_z + 2 * p.g_z)
    assert is_hermitian(h, 1e-14) or frobenius_norm(h) == 0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_symmetric_is_anisotropic_special_case(seed):
    p = random_symmetric_params(np.random.Generator(np.random.PCG64(seed)))
    gap = frobenius_norm(build_symmetric(p) - build_anisotropic(p.as_anisotropic()))
    assert gap < 1e-14 * max(1.0, frobenius_norm(build_symmetric(p)))


def test_build_symmetric_swap_invariance():
    # exchanging the two system qubits permutes basis bits 1 and 2
    p = SymmetricParams(0.7, -0.4, 1.1, 0.2)
    h = build_symmetric(p)
    perm = [int(f"{(k >> 1) & 1}{(k >> 2) & 1}{k & 1}", 2) for k in range(8)]
    assert np.allclose(h[np.ix_(perm, perm)], h, atol=1e-14)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_build_anisotropic_hermitian(seed):
    p = random_anisotropic_params(np.random.Generator(np.random.PCG64(seed)))
    h = build_anisotropic(p)
    assert is_hermitian(h, 1e-14) or frobenius_norm(h) == 0


def test_build_anisotropic_ising_limit_commutes_with_all_z():
    p = AnisotropicParams(0, 0, 0.9, 0, 0, -0.4, 0, 0, 1.3)
    h = build_anisotropic(p)
    for site in (1, 2, 3):
        assert frobenius_norm(commutator(h, pauli("z", site, 3))) < 1e-14
