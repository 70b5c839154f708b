"""Exact simulation of the repeated-measurement protocol.

One protocol step is: evolve the composite system-ancilla state for tau
under the full Hamiltonian, measure the ancilla, keep the run only when the
measured outcome equals the monitored state.  `simulate_conditional` follows
the deterministic filtered state; `simulate_trajectories` plays the game
with actual Monte Carlo measurement records and counts survivors.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import ConditionalState, DensityMatrix, P_MIN, evolve_conditional, normalize
from .effective import AncillaSpec, ancilla_order, derive_effective, kraus_step
from .errors import (
    BadDimensionError,
    NumericalError,
    ProbabilityUnderflowError,
    StroboscopicRegimeWarning,
    ValidationError,
)
from .linalg import as_cmatrix, dagger, expm, frobenius_norm, hermitian_eig, hermitian_part, is_hermitian

CHAIN_CONSISTENCY_RTOL = 1e-12


@dataclass(frozen=True)
class ProtocolConfig:
    """Composite Hamiltonian, ancilla addressing, step length, step count.

    Emits StroboscopicRegimeWarning when tau times the largest Bohr frequency
    of H reaches 1; the protocol still runs, but the effective-generator
    picture stops being a useful approximation there.
    """

    h: np.ndarray
    spec: AncillaSpec
    tau: float
    n_steps: int

    def __post_init__(self):
        hm = as_cmatrix(self.h)
        if not is_hermitian(hm):
            raise ValidationError("protocol Hamiltonian must be Hermitian")
        if not self.tau > 0:
            raise ValidationError(f"tau must be positive, got {self.tau}")
        if self.n_steps < 0:
            raise ValidationError(f"n_steps must be nonnegative, got {self.n_steps}")
        ancilla_order(hm.shape[0], self.spec)  # validates dimension and site
        object.__setattr__(self, "h", hm)
        w = hermitian_eig(hm).eigenvalues
        if self.tau * (w[-1] - w[0]) >= 1.0:
            warnings.warn(
                f"tau * max Bohr frequency = {self.tau * (w[-1] - w[0]):.3f} >= 1; "
                "stroboscopic limit not trustworthy",
                StroboscopicRegimeWarning,
                stacklevel=2,
            )

    @property
    def system_dim(self) -> int:
        return self.h.shape[0] // 2


def simulate_conditional(cfg: ProtocolConfig, rho0: DensityMatrix) -> ConditionalState:
    """Deterministic filtered state after n_steps successful measurements.

    The survival probability is accumulated two independent ways, as the
    trace of K^n rho0 K^n dagger and as the telescoping product of per-step
    conditional probabilities; both must agree to CHAIN_CONSISTENCY_RTOL.
    """
    if rho0.dim != cfg.system_dim:
        raise BadDimensionError(
            f"state dim {rho0.dim} != system dim {cfg.system_dim}"
        )
    if cfg.n_steps == 0:
        return ConditionalState(rho_c=rho0.rho.copy(), p=1.0, t=0.0)
    k = kraus_step(cfg.h, cfg.spec, cfg.tau)
    kd = dagger(k)

    rho = rho0.rho.copy()
    log_p = 0.0
    for _ in range(cfg.n_steps):
        rho = k @ rho @ kd
        tr = np.trace(rho).real
        if not tr > 0 or not math.isfinite(tr):
            raise ProbabilityUnderflowError(f"conditional probability hit {tr}")
        rho = hermitian_part(rho / tr)
        log_p += math.log(tr)
    p_chain = math.exp(log_p) if log_p > -745 else 0.0

    k_pow = np.eye(k.shape[0], dtype=complex)
    for _ in range(cfg.n_steps):
        k_pow = k @ k_pow
    p_direct = np.trace(k_pow @ rho0.rho @ dagger(k_pow)).real
    if p_direct > 1e-250:
        gap = abs(p_direct - p_chain)
        if gap > CHAIN_CONSISTENCY_RTOL * max(p_direct, p_chain):
            raise NumericalError(
                f"survival probability routes disagree: {p_direct:.15e} vs {p_chain:.15e}"
            )
    if p_chain <= P_MIN:
        raise ProbabilityUnderflowError(
            f"survival probability {p_chain:.3e} at or below floor {P_MIN:g}"
        )
    p = min(p_chain, 1.0)
    return ConditionalState(rho_c=rho * p, p=p, t=cfg.n_steps * cfg.tau)


def conditional_survival_curve(cfg: ProtocolConfig, rho0: DensityMatrix) -> np.ndarray:
    """Exact survival probability after each of the n_steps measurements."""
    if rho0.dim != cfg.system_dim:
        raise BadDimensionError(
            f"state dim {rho0.dim} != system dim {cfg.system_dim}"
        )
    k = kraus_step(cfg.h, cfg.spec, cfg.tau)
    kd = dagger(k)
    rho = rho0.rho.copy()
    log_p = 0.0
    out = np.empty(cfg.n_steps)
    for step in range(cfg.n_steps):
        rho = k @ rho @ kd
        tr = np.trace(rho).real
        if not tr > 0 or not math.isfinite(tr):
            raise ProbabilityUnderflowError(f"conditional probability hit {tr}")
        rho = hermitian_part(rho / tr)
        log_p += math.log(tr)
        out[step] = math.exp(log_p) if log_p > -745 else 0.0
    return out


@dataclass(frozen=True)
class TrajectoryEnsemble:
    """Survivor counts after each step of a Monte Carlo run.

    survival_counts[k] is the number of trajectories still alive after
    measurement k+1; survived_states (optional) are the normalized system
    kets of the survivors after the final step, in trajectory order.
    """

    n_traj: int
    seed: int
    survival_counts: np.ndarray
    survived_states: np.ndarray | None = None

    def __post_init__(self):
        counts = np.asarray(self.survival_counts, dtype=np.int64)
        if counts.size and (np.any(np.diff(counts) > 0) or counts[0] > self.n_traj):
            raise NumericalError("survivor counts must be non-increasing")
        object.__setattr__(self, "survival_counts", counts)

    def empirical_survival(self) -> np.ndarray:
        return self.survival_counts / self.n_traj


def _trajectory_uniforms(seed: int, index: int, n: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=(seed, index))))
    return rng.random(n)


def _initial_ensemble(rho0: DensityMatrix):
    """Eigendecomposition of rho0 for sampling pure initial kets."""
    eig = hermitian_eig(rho0.rho)
    w = np.clip(eig.eigenvalues, 0.0, None)
    w = w / w.sum()
    return np.cumsum(w), eig.eigenvectors


def _run_chunk(args):
    u, measured, cum_weights, vectors, seed, start, stop, n_steps, keep_states = args
    dim = vectors.shape[0]
    n_local = stop - start
    uniforms = np.empty((n_local, n_steps + 1))
    for i in range(n_local):
        uniforms[i] = _trajectory_uniforms(seed, start + i, n_steps + 1)
    picks = np.searchsorted(cum_weights, uniforms[:, 0], side="right")
    picks = np.minimum(picks, dim - 1)
    states = vectors[:, picks].T.copy()
    alive = np.arange(n_local)
    counts = np.zeros(n_steps, dtype=np.int64)
    ut = u.T.copy()
    for step in range(n_steps):
        composite = np.zeros((alive.size, 2 * dim), dtype=complex)
        composite[:, measured::2] = states
        composite = composite @ ut
        amp = composite[:, measured::2]
        p_keep = np.einsum("ij,ij->i", amp, amp.conj()).real
        p_keep = np.clip(p_keep, 0.0, 1.0)
        kept = uniforms[alive, step + 1] < p_keep
        alive = alive[kept]
        states = amp[kept] / np.sqrt(p_keep[kept])[:, None]
        counts[step] = alive.size
    return counts, (states if keep_states else None)


def simulate_trajectories(
    cfg: ProtocolConfig,
    rho0: DensityMatrix,
    n_traj: int,
    seed: int,
    keep_states: bool = False,
    n_workers: int = 1,
) -> TrajectoryEnsemble:
    """Monte Carlo measurement records for n_traj independent trajectories.

    Every trajectory owns a counter-based Philox stream seeded by (seed,
    trajectory index) and draws all its uniforms up front, so results are
    bit-identical for a given (seed, n_traj) regardless of execution order
    or worker count.  A trajectory that fails a measurement is discarded
    from that step on.
    """
    if rho0.dim != cfg.system_dim:
        raise BadDimensionError(
            f"state dim {rho0.dim} != system dim {cfg.system_dim}"
        )
    if n_traj < 1:
        raise ValidationError(f"n_traj must be positive, got {n_traj}")
    if n_workers < 1:
        raise ValidationError(f"n_workers must be positive, got {n_workers}")
    order = ancilla_order(cfg.h.shape[0], cfg.spec)
    hc = cfg.h[np.ix_(order, order)]
    u = expm(-1j * cfg.tau * hc)
    cum_weights, vectors = _initial_ensemble(rho0)
    chunks = []
    n_workers = min(n_workers, n_traj)
    bounds = np.linspace(0, n_traj, n_workers + 1).astype(int)
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi > lo:
            chunks.append(
                (u, cfg.spec.measured_state, cum_weights, vectors, seed,
                 int(lo), int(hi), cfg.n_steps, keep_states)
            )
    if n_workers == 1:
        results = [_run_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_run_chunk, chunks))
    counts = np.sum([r[0] for r in results], axis=0).astype(np.int64)
    finals = np.concatenate([r[1] for r in results]) if keep_states else None
    return TrajectoryEnsemble(
        n_traj=n_traj, seed=seed, survival_counts=counts, survived_states=finals
    )


def stroboscopic_error(cfg: ProtocolConfig, rho0: DensityMatrix) -> float:
    """Frobenius distance between the normalized exact protocol state and the
    normalized effective-generator state at t = n_steps * tau."""
    exact = normalize(simulate_conditional(cfg, rho0))
    eff = derive_effective(cfg.h, cfg.spec, cfg.tau)
    approx = normalize(evolve_conditional(eff, rho0, cfg.n_steps * cfg.tau))
    return frobenius_norm(exact.rho - approx.rho)


def write_ensemble_csv(path, ensemble: TrajectoryEnsemble, p_exact) -> None:
    """CSV with columns step,survivors,p_exact,p_empirical (one row per step)."""
    p_exact = np.asarray(p_exact, dtype=float)
    if p_exact.shape != ensemble.survival_counts.shape:
        raise BadDimensionError(
            f"p_exact length {p_exact.size} != step count {ensemble.survival_counts.size}"
        )
    lines = ["step,survivors,p_exact,p_empirical"]
    empirical = ensemble.empirical_survival()
    for k, (survivors, pe, pm) in enumerate(
        zip(ensemble.survival_counts, p_exact, empirical), start=1
    ):
        lines.append(f"{k},{int(survivors)},{float(pe)!r},{float(pm)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
