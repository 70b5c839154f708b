"""Shared test utilities: random draws and independent closed-form oracles.

The closed-form matrix builders here are written from the algebra directly
(Pauli coefficients entered by hand), never by calling the code under test,
so they can confront derive_effective and friends as independent routes.
"""

import numpy as np

from zenon.spin_models import SIGMA, AnisotropicParams, SymmetricParams

EYE2 = np.eye(2, dtype=complex)


def two_qubit(axis: str, site: int) -> np.ndarray:
    op = SIGMA[axis]
    return np.kron(op, EYE2) if site == 1 else np.kron(EYE2, op)


XX = two_qubit("x", 1) @ two_qubit("x", 2)
YY = two_qubit("y", 1) @ two_qubit("y", 2)
ZZ = two_qubit("z", 1) @ two_qubit("z", 2)
Z1 = two_qubit("z", 1)
Z2 = two_qubit("z", 2)


def symmetric_effective_matrix(p: SymmetricParams, tau: float) -> np.ndarray:
    """Closed-form effective generator of the symmetric model, written out
    entry by entry in the |00>,|01>,|10>,|11> basis."""
    g2 = p.g_xy**2
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = p.gamma_z + 2 * p.g_z + 2j * tau * g2
    m[1, 1] = m[2, 2] = -p.gamma_z
    m[1, 2] = m[2, 1] = 2 * p.gamma_xy - 2j * tau * g2
    m[3, 3] = p.gamma_z - 2 * p.g_z - 2j * tau * g2
    return m - 2j * tau * g2 * np.eye(4)


def anisotropic_effective_matrix(p: AnisotropicParams, tau: float) -> np.ndarray:
    """Closed-form effective generator of the anisotropic model as a Pauli
    expansion (the sigma1z sigma2z coefficient is exactly gamma_z)."""
    const = p.alpha_x**2 + p.alpha_y**2 + p.beta_x**2 + p.beta_y**2
    return (
        -0.5j * tau * const * np.eye(4, dtype=complex)
        + (p.gamma_x - 1j * tau * p.alpha_x * p.beta_x) * XX
        + (p.gamma_y - 1j * tau * p.alpha_y * p.beta_y) * YY
        + p.gamma_z * ZZ
        + (p.alpha_z + 1j * tau * p.alpha_x * p.alpha_y) * Z1
        + (p.beta_z + 1j * tau * p.beta_x * p.beta_y) * Z2
    )


def anisotropic_block_coefficients(p: AnisotropicParams, tau: float):
    """(Omega_plus, omega_plus, Omega_minus, omega_minus) from the published
    block formulas."""
    omega_big_plus = (p.alpha_z + p.beta_z) + 1j * tau * (
        p.alpha_x * p.alpha_y + p.beta_x * p.beta_y
    )
    omega_small_plus = (p.gamma_x - p.gamma_y) - 1j * tau * (
        p.alpha_x * p.beta_x - p.alpha_y * p.beta_y
    )
    omega_big_minus = (p.alpha_z - p.beta_z) + 1j * tau * (
        p.alpha_x * p.alpha_y - p.beta_x * p.beta_y
    )
    omega_small_minus = (p.gamma_x + p.gamma_y) - 1j * tau * (
        p.alpha_x * p.beta_x + p.alpha_y * p.beta_y
    )
    return omega_big_plus, omega_small_plus, omega_big_minus, omega_small_minus


def random_complex(rng, dim: int) -> np.ndarray:
    return rng.uniform(-1, 1, (dim, dim)) + 1j * rng.uniform(-1, 1, (dim, dim))


def random_hermitian(rng, dim: int) -> np.ndarray:
    m = random_complex(rng, dim)
    return (m + m.conj().T) / 2


def random_psd(rng, dim: int) -> np.ndarray:
    b = random_complex(rng, dim)
    return b @ b.conj().T


def random_ket(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_symmetric_params(rng) -> SymmetricParams:
    return SymmetricParams(*(float(x) for x in rng.uniform(-2, 2, 4)))


def random_anisotropic_params(rng) -> AnisotropicParams:
    return AnisotropicParams(*(float(x) for x in rng.uniform(-2, 2, 9)))


def taylor_expm(a: np.ndarray, terms: int = 30) -> np.ndarray:
    """Plain truncated exponential series; accurate for ||a|| < 1."""
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ a / k
        out = out + term
    return out


FIG5_REALIZATIONS = {
    "a": AnisotropicParams(1.0, 0.0, 0.3, 0.0, 1.0, 0.05, 0.1, 1.0, 0.05),
    "b": AnisotropicParams(1.0, 0.0, 0.3, 0.0, 0.1, 0.005, 0.01, 1.0, 0.005),
    "c": AnisotropicParams(1.0, 0.0, 0.3, 0.0, 1.0, 0.05, 0.01, 10.0, 0.05),
}
