"""Conditional (measurement-filtered) evolution generated by an effective
non-Hermitian Hamiltonian, plus the trace-preserving nonlinear form.

Two faces of the same dynamics: propagating with exp(-i H_eff t) gives the
unnormalized conditional state whose trace is the survival probability, and
dividing that trace out is equivalent to integrating the nonlinear equation

    d rho / dt = -i [h0, rho] - (tau/2) {gamma, rho} + tau tr(gamma rho) rho,

whose last term feeds the lost norm back in.  Both routes are implemented
independently so they can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .effective import EffectiveHamiltonian
from .errors import (
    BadDimensionError,
    NumericalError,
    ProbabilityUnderflowError,
    StepTooLargeError,
    ValidationError,
)
from .linalg import (
    as_cmatrix,
    dagger,
    expm,
    frobenius_norm,
    hermitian_eig,
    hermitian_part,
    is_hermitian,
    trace,
)

P_MIN = 1e-12
STEP_NORM_LIMIT = 0.1


def _validate_density(rho: np.ndarray) -> np.ndarray:
    m = as_cmatrix(rho)
    if not is_hermitian(m):
        raise ValidationError("density matrix must be Hermitian")
    if abs(trace(m) - 1.0) > 1e-10:
        raise ValidationError(f"density matrix trace {trace(m):.12f} != 1")
    w = hermitian_eig(m).eigenvalues
    if w[0] < -1e-10 * max(1.0, frobenius_norm(m)):
        raise ValidationError(f"density matrix has eigenvalue {w[0]:.6e} < 0")
    return hermitian_part(m)


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive semidefinite state. Validated on construction."""

    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", _validate_density(self.rho))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def from_pure(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).ravel()
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValidationError("cannot normalize the zero vector")
        v = v / nrm
        return cls(np.outer(v, v.conj()))

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "DensityMatrix":
        if not 0 <= index < dim:
            raise ValidationError(f"basis index {index} outside 0..{dim - 1}")
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls.from_pure(v)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    def purity(self) -> float:
        return float(trace(self.rho @ self.rho).real)


@dataclass(frozen=True)
class ConditionalState:
    """Unnormalized post-selected state: trace(rho_c) is the survival
    probability p of the filter up to time t."""

    rho_c: np.ndarray
    p: float
    t: float

    def __post_init__(self):
        m = as_cmatrix(self.rho_c)
        if not is_hermitian(m):
            raise ValidationError("conditional state must be Hermitian")
        if abs(self.p - trace(m).real) > 1e-10:
            raise ValidationError(
                f"p {self.p:.12e} does not match trace {trace(m).real:.12e}"
            )
        if not -1e-12 <= self.p <= 1.0 + 1e-9:
            raise ValidationError(f"survival probability {self.p} outside [0, 1]")
        object.__setattr__(self, "rho_c", hermitian_part(m))


def evolve_conditional(eff: EffectiveHamiltonian, rho0: DensityMatrix, t: float) -> ConditionalState:
    """Propagate rho0 with exp(-i H_eff t) without normalizing."""
    if t < 0:
        raise ValidationError(f"t must be nonnegative, got {t}")
    if rho0.dim != eff.dim:
        raise BadDimensionError(f"state dim {rho0.dim} != generator dim {eff.dim}")
    u = expm(-1j * t * eff.matrix())
    rc = hermitian_part(u @ rho0.rho @ dagger(u))
    return ConditionalState(rho_c=rc, p=trace(rc).real, t=t)


def normalize(cs: ConditionalState) -> DensityMatrix:
    """Divide out the survival probability; fails below P_MIN."""
    if cs.p <= P_MIN:
        raise ProbabilityUnderflowError(
            f"survival probability {cs.p:.3e} at or below floor {P_MIN:g}"
        )
    return DensityMatrix(cs.rho_c / trace(cs.rho_c).real)


def success_probability_rate(eff: EffectiveHamiltonian, cs: ConditionalState) -> float:
    """dp/dt = -tau * tr(gamma rho_c); never positive for PSD gamma."""
    return -eff.tau * trace(eff.gamma @ cs.rho_c).real


def default_time_step(eff: EffectiveHamiltonian) -> float:
    """1e-3 over the larger of ||h0||_F and tau ||gamma||_F."""
    scale = max(frobenius_norm(eff.h0), eff.tau * frobenius_norm(eff.gamma))
    if scale == 0.0:
        return 1e-3
    return 1e-3 / scale


def _check_step(eff: EffectiveHamiltonian, t: float, dt: float) -> None:
    if not dt > 0:
        raise StepTooLargeError(f"dt must be positive, got {dt}")
    if dt > t:
        raise StepTooLargeError(f"dt {dt:g} exceeds the integration time {t:g}")
    if dt * frobenius_norm(eff.matrix()) > STEP_NORM_LIMIT:
        raise StepTooLargeError(
            f"dt * ||H_eff|| = {dt * frobenius_norm(eff.matrix()):.3e} > {STEP_NORM_LIMIT}"
        )


def integrate_nonlinear(
    eff: EffectiveHamiltonian, rho0: DensityMatrix, t: float, dt: float | None = None
) -> DensityMatrix:
    """RK4 integration of the trace-preserving nonlinear equation.

    The right-hand side has exactly zero trace on unit-trace input, so the
    per-step renormalization only removes rounding; the drift is asserted
    below 1e-12 each step.
    """
    if t < 0:
        raise ValidationError(f"t must be nonnegative, got {t}")
    if rho0.dim != eff.dim:
        raise BadDimensionError(f"state dim {rho0.dim} != generator dim {eff.dim}")
    if t == 0:
        return rho0
    if dt is None:
        dt = min(default_time_step(eff), t)
    _check_step(eff, t, dt)

    h0 = eff.h0
    gamma = eff.gamma
    tau = eff.tau

    def rhs(rho):
        hr = h0 @ rho
        gr = gamma @ rho
        feed = tau * np.trace(gr).real
        return (
            -1j * (hr - dagger(hr))
            - 0.5 * tau * (gr + dagger(gr))
            + feed * rho
        )

    n_full = int(math.floor(t / dt + 1e-12))
    remainder = t - n_full * dt
    rho = rho0.rho.copy()
    for step_dt in [dt] * n_full + ([remainder] if remainder > 1e-15 * t else []):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * step_dt * k1)
        k3 = rhs(rho + 0.5 * step_dt * k2)
        k4 = rhs(rho + step_dt * k3)
        rho = rho + (step_dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-12:
            raise NumericalError(f"trace drift {tr - 1.0:.3e} exceeds 1e-12 per step")
        rho = rho / tr
    return DensityMatrix(hermitian_part(rho))


def integrate_pure_nonlinear(
    eff: EffectiveHamiltonian, psi0, t: float, dt: float | None = None
) -> np.ndarray:
    """Pure-state version: d psi/dt = (-i h0 - (tau/2) gamma + (tau/2)<gamma>) psi."""
    psi = np.asarray(psi0, dtype=complex).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise ValidationError("psi0 must be normalized to 1e-12")
    if psi.size != eff.dim:
        raise BadDimensionError(f"state dim {psi.size} != generator dim {eff.dim}")
    if t < 0:
        raise ValidationError(f"t must be nonnegative, got {t}")
    if t == 0:
        return psi.copy()
    if dt is None:
        dt = min(default_time_step(eff), t)
    _check_step(eff, t, dt)

    h0 = eff.h0
    gamma = eff.gamma
    tau = eff.tau

    def rhs(v):
        gv = gamma @ v
        avg = (v.conj() @ gv).real
        return -1j * (h0 @ v) - 0.5 * tau * gv + 0.5 * tau * avg * v

    n_full = int(math.floor(t / dt + 1e-12))
    remainder = t - n_full * dt
    for step_dt in [dt] * n_full + ([remainder] if remainder > 1e-15 * t else []):
        k1 = rhs(psi)
        k2 = rhs(psi + 0.5 * step_dt * k1)
        k3 = rhs(psi + 0.5 * step_dt * k2)
        k4 = rhs(psi + step_dt * k3)
        psi = psi + (step_dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        nrm = np.linalg.norm(psi)
        if abs(nrm - 1.0) > 1e-12:
            raise NumericalError(f"norm drift {nrm - 1.0:.3e} exceeds 1e-12 per step")
        psi = psi / nrm
    return psi


def expectation(state, observable) -> float:
    """tr(rho X) for Hermitian X; the imaginary part must sit below 1e-10."""
    rho = state.rho if isinstance(state, DensityMatrix) else as_cmatrix(state)
    x = as_cmatrix(observable)
    if not is_hermitian(x):
        raise ValidationError("observable must be Hermitian")
    val = trace(rho @ x)
    if abs(val.imag) > 1e-10 * max(1.0, frobenius_norm(x)):
        raise NumericalError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def conditional_trajectory(h_eff, rho0: DensityMatrix, t_max: float, n_samples: int):
    """Normalized conditional states on a uniform grid, with survival tracking.

    Works directly on a (possibly non-Hermitian) generator matrix h_eff.  The
    state is renormalized every step and the survival probability accumulated
    in log space, so long strongly-damped runs neither underflow nor overflow.
    Returns (times, survival, states) with states a list of unit-trace
    matrices; survival may reach exactly 0.0 once exp underflows.
    """
    m = as_cmatrix(h_eff)
    if rho0.dim != m.shape[0]:
        raise BadDimensionError(f"state dim {rho0.dim} != generator dim {m.shape[0]}")
    if not t_max > 0:
        raise ValidationError(f"t_max must be positive, got {t_max}")
    if n_samples < 2:
        raise ValidationError(f"n_samples must be at least 2, got {n_samples}")
    dt = t_max / (n_samples - 1)
    u = expm(-1j * dt * m)
    times = np.array([k * dt for k in range(n_samples)])
    rho = rho0.rho.copy()
    log_p = 0.0
    survival = np.empty(n_samples)
    survival[0] = 1.0
    states = [rho.copy()]
    for k in range(1, n_samples):
        rho = u @ rho @ dagger(u)
        tr = np.trace(rho).real
        if not tr > 0 or not math.isfinite(tr):
            raise ProbabilityUnderflowError(
                f"conditional trace collapsed to {tr} at t = {times[k]:g}"
            )
        rho = hermitian_part(rho / tr)
        log_p += math.log(tr)
        survival[k] = math.exp(log_p) if log_p > -745 else 0.0
        states.append(rho.copy())
    return times, survival, states


def basis_labels(dim: int) -> list[str]:
    """Bitstring labels when dim is a power of two, plain indices otherwise."""
    n = dim.bit_length() - 1
    if 2**n == dim and n >= 1:
        return [format(k, f"0{n}b") for k in range(dim)]
    return [str(k) for k in range(dim)]


def default_coherence_pair(dim: int, initial_index: int | None = None) -> tuple[int, int]:
    """Pair (k, dim-1-k) whose off-diagonal element the time series reports."""
    k = 0 if initial_index is None else min(initial_index, dim - 1 - initial_index)
    return (k, dim - 1 - k)


def write_timeseries_csv(path, times, survival, states, coherence_pair) -> None:
    """CSV with columns t,p,pop_<basis>...,re_coh,im_coh,purity.

    Floats are written with repr so rerunning the same scenario reproduces
    the file byte for byte.
    """
    dim = states[0].shape[0]
    i, j = coherence_pair
    if not (0 <= i < dim and 0 <= j < dim):
        raise ValidationError(f"coherence pair {coherence_pair} outside 0..{dim - 1}")
    labels = basis_labels(dim)
    header = ["t", "p"] + [f"pop_{s}" for s in labels] + ["re_coh", "im_coh", "purity"]
    lines = [",".join(header)]
    for t, p, rho in zip(times, survival, states):
        pops = [rho[k, k].real for k in range(dim)]
        coh = rho[i, j]
        purity = (rho @ rho).trace().real
        row = [t, p, *pops, coh.real, coh.imag, purity]
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
