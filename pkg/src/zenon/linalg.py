"""Dense complex linear algebra kernels shared by the rest of the package.

Matrices are plain numpy arrays of dtype complex128, square, row-major.
Everything here is pure: no function mutates its argument, so values can be
shared freely between callers and threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NotPSDError, ValidationError

HERMITICITY_RTOL = 1e-10
EXPM_SCALE_LIMIT = 0.5
EXPM_SERIES_ORDER = 18


def as_cmatrix(a) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting anything else."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a) + np.asarray(b)


def scale(a: np.ndarray, s: complex) -> np.ndarray:
    return s * np.asarray(a)


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(a))


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with a's index as the major (most significant) one."""
    return np.kron(a, b)


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Return (A + A^dag) / 2."""
    return (a + dagger(a)) / 2


def anti_hermitian_part(a: np.ndarray) -> np.ndarray:
    """Return (A - A^dag) / 2."""
    return (a - dagger(a)) / 2


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_RTOL) -> bool:
    """Relative Frobenius test of A == A^dag (a zero matrix passes)."""
    return frobenius_norm(a - dagger(a)) <= tol * frobenius_norm(a)


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors is unitary with column k
    belonging to eigenvalues[k].
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a, tol: float = HERMITICITY_RTOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, symmetrized before solving."""
    m = as_cmatrix(a)
    if not is_hermitian(m, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian within relative tolerance {tol:g}"
        )
    w, v = np.linalg.eigh(hermitian_part(m))
    return EigenDecomposition(w, v)


def expm(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring.

    The input is halved until its Frobenius norm is at most 0.5, an order-18
    Taylor polynomial is evaluated in Horner form, and the result is squared
    back up.  At that norm the series truncation error sits far below double
    rounding, so no Pade machinery is needed.
    """
    m = as_cmatrix(a)
    n = m.shape[0]
    nrm = frobenius_norm(m)
    squarings = 0
    if nrm > EXPM_SCALE_LIMIT:
        squarings = int(np.ceil(np.log2(nrm / EXPM_SCALE_LIMIT)))
    b = m / (2.0**squarings)
    eye = np.eye(n, dtype=complex)
    out = eye.copy()
    for k in range(EXPM_SERIES_ORDER, 0, -1):
        out = eye + (b / k) @ out
    for _ in range(squarings):
        out = out @ out
    return out


def psd_sqrt(a, tol: float | None = None) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol raises
    NotPSDError.  tol defaults to 1e-10 times the Frobenius norm.
    """
    m = as_cmatrix(a)
    if tol is None:
        tol = 1e-10 * frobenius_norm(m)
    eig = hermitian_eig(m)
    w = eig.eigenvalues
    if w[0] < -tol:
        raise NotPSDError(
            f"minimum eigenvalue {w[0]:.6e} is below the PSD tolerance -{tol:.6e}"
        )
    v = eig.eigenvectors
    r = (v * np.sqrt(np.clip(w, 0.0, None))) @ dagger(v)
    return hermitian_part(r)


def matrix_to_json(a) -> dict:
    """Serialize a square complex matrix to {dim, re, im} with row-major entries."""
    m = as_cmatrix(a)
    return {
        "dim": int(m.shape[0]),
        "re": [float(x) for x in m.real.ravel()],
        "im": [float(x) for x in m.imag.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Inverse of matrix_to_json; rejects mismatched entry counts."""
    if not isinstance(obj, dict):
        raise ValidationError("matrix object must be a JSON mapping")
    try:
        dim = int(obj["dim"])
        re = list(obj["re"])
        im = list(obj["im"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"matrix object needs dim/re/im fields: {exc}") from exc
    if dim < 1:
        raise ValidationError(f"matrix dim must be positive, got {dim}")
    if len(re) != dim * dim or len(im) != dim * dim:
        raise ValidationError(
            f"matrix entry count mismatch: dim {dim} needs {dim * dim} entries, "
            f"got {len(re)} real and {len(im)} imaginary"
        )
    m = np.array(re, dtype=float) + 1j * np.array(im, dtype=float)
    return m.reshape(dim, dim)
