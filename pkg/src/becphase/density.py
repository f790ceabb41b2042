"""Reduced qubit-pair density matrices: numeric partial trace, analytic forms,
and eigen-decomposition with branch continuity along a time path."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .model import ModelParams, branch_frequency
from .dynamics import JointState, validate_joint

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
DEGENERACY_TOL = 1e-9
SUPPORT_TOL = 1e-12


class Scenario(str, Enum):
    MICRO_MICRO = "micro_micro"
    MACRO_BOTH = "macro_both"
    MACRO_SINGLE = "macro_single"


# Index pair of the occupied 2x2 block in the (|00>,|11>,|01>,|10>) basis.
BLOCK_INDEX = {
    Scenario.MICRO_MICRO: (0, 1),
    Scenario.MACRO_BOTH: (0, 1),
    Scenario.MACRO_SINGLE: (0, 2),
}


@dataclass(frozen=True)
class DecayPhase:
    """Scenario off-diagonal phase Lambda(t) and decay Gamma(t), with their
    time derivative of the phase for quadrature use."""

    scenario: Scenario
    variant: str
    lambda_fn: Callable[[np.ndarray], np.ndarray]
    gamma_fn: Callable[[np.ndarray], np.ndarray]
    lambda_dot_fn: Callable[[np.ndarray], np.ndarray]


def decay_phase(scenario: Scenario, p: ModelParams, variant: str = "corrected") -> DecayPhase:
    """Closed-form phase/decay pair of the off-diagonal element for a scenario.

    For MACRO_SINGLE two variants exist: "corrected" is the one derived from
    the branch spectrum (detuning omega - 2J, coupling-frequency factors) and
    matches the numerical evolution; "verbatim" keeps the published printed
    form (detuning omega - 4J, doubled-frequency factors) for comparison.
    For the other scenarios both variant names return the same functions.
    """
    if variant not in ("corrected", "verbatim"):
        raise ValueError(f"unknown variant {variant!r}")
    a2 = abs(p.alpha) ** 2
    w, J, lam = p.omega, p.j_vdw, p.lambda_c
    if scenario == Scenario.MICRO_MICRO:
        return DecayPhase(
            scenario,
            variant,
            lambda t: 2 * w * t + a2 * np.sin(2 * lam * t),
            lambda t: 2 * a2 * np.sin(lam * t) ** 2,
            lambda t: 2 * w + 2 * lam * a2 * np.cos(2 * lam * t),
        )
    if scenario == Scenario.MACRO_BOTH:
        return DecayPhase(
            scenario,
            variant,
            lambda t: 2 * w * t - a2 * np.sin(2 * lam * t),
            lambda t: 2 * a2 * np.cos(lam * t) ** 2,
            lambda t: 2 * w - 2 * lam * a2 * np.cos(2 * lam * t),
        )
    if scenario == Scenario.MACRO_SINGLE:
        if variant == "corrected":
            return DecayPhase(
                scenario,
                variant,
                lambda t: (w - 2 * J) * t - a2 * np.sin(lam * t),
                lambda t: 2 * a2 * np.cos(lam * t / 2) ** 2,
                lambda t: (w - 2 * J) - lam * a2 * np.cos(lam * t),
            )
        return DecayPhase(
            scenario,
            variant,
            lambda t: (w - 4 * J) * t - a2 * np.sin(2 * lam * t),
            lambda t: 2 * a2 * np.cos(lam * t) ** 2,
            lambda t: (w - 4 * J) - 2 * lam * a2 * np.cos(2 * lam * t),
        )
    raise ValueError(f"unknown scenario {scenario!r}")


@dataclass(frozen=True)
class QubitDensity:
    """4x4 reduced density matrix of the qubit pair in (|00>,|11>,|01>,|10>) order."""

    mat: np.ndarray
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        mat = np.asarray(self.mat, dtype=complex)
        if mat.shape != (4, 4):
            raise ValueError("density matrix must be 4x4")
        object.__setattr__(self, "mat", mat)


def validate_density(
    rho: QubitDensity,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    eig_tol: float = POSITIVITY_TOL,
) -> None:
    m = rho.mat
    herm = np.max(np.abs(m - m.conj().T))
    if herm > herm_tol:
        raise ValueError(f"density matrix not Hermitian: deviation {herm:g}")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    ev = np.linalg.eigvalsh(m)
    if ev.min() < -eig_tol:
        raise ValueError(f"density matrix has negative eigenvalue {ev.min():g}")


def partial_trace(state: JointState, timestamp: float = 0.0) -> QubitDensity:
    """Trace out the mode: mat[i, j] = c_i conj(c_j) <phi_j|phi_i>."""
    validate_joint(state)
    amps = np.stack([b.amps for b in state.branches])
    gram = amps.conj() @ amps.T  # gram[j, i] = <phi_j|phi_i>
    c = state.coeffs
    mat = np.outer(c, c.conj()) * gram.T
    return QubitDensity(mat, timestamp)


def oracle_rho_path(
    state0: JointState, times: np.ndarray, p: ModelParams, chunk: int = 8192
) -> np.ndarray:
    """Reduced density matrices at many times, identical to evolving and
    partial-tracing point by point but computed in vectorized chunks."""
    validate_joint(state0)
    times = np.asarray(times, dtype=float)
    amps = np.stack([b.amps for b in state0.branches])  # (4, D)
    n = np.arange(state0.n_max + 1)
    thetas = np.stack([branch_frequency(b, n, p) for b in range(4)])  # (4, D)
    c = state0.coeffs
    weight = np.outer(c, c.conj())
    out = np.empty((times.size, 4, 4), dtype=complex)
    for start in range(0, times.size, chunk):
        ts = times[start : start + chunk]
        phases = np.exp(-1j * ts[:, None, None] * thetas[None, :, :])
        evolved = amps[None, :, :] * phases
        gram = np.einsum("mjn,min->mij", evolved.conj(), evolved)
        out[start : start + ts.size] = weight[None, :, :] * gram
    return out


def analytic_block(dp: DecayPhase, eta0: float, t) -> np.ndarray:
    """Occupied 2x2 block [[cos^2, off],[conj(off), sin^2]] with
    off = sin(2 eta0)/2 * exp(i Lambda - Gamma), vectorized over t."""
    t = np.asarray(t, dtype=float)
    lam = dp.lambda_fn(t)
    gam = dp.gamma_fn(t)
    off = 0.5 * math.sin(2 * eta0) * np.exp(1j * lam - gam)
    block = np.zeros(t.shape + (2, 2), dtype=complex)
    block[..., 0, 0] = math.cos(eta0) ** 2
    block[..., 1, 1] = math.sin(eta0) ** 2
    block[..., 0, 1] = off
    block[..., 1, 0] = np.conj(off)
    return block


def embed_block(block: np.ndarray, scenario: Scenario) -> np.ndarray:
    """Place a (...,2,2) block at the scenario's index pair of a 4x4 matrix."""
    i0, i1 = BLOCK_INDEX[scenario]
    out = np.zeros(block.shape[:-2] + (4, 4), dtype=complex)
    out[..., i0, i0] = block[..., 0, 0]
    out[..., i0, i1] = block[..., 0, 1]
    out[..., i1, i0] = block[..., 1, 0]
    out[..., i1, i1] = block[..., 1, 1]
    return out


def analytic_rho_path(
    scenario: Scenario,
    eta0: float,
    p: ModelParams,
    times: np.ndarray,
    variant: str = "corrected",
) -> np.ndarray:
    dp = decay_phase(scenario, p, variant)
    return embed_block(analytic_block(dp, eta0, times), scenario)


# ---------------------------------------------------------------------------
# Eigen-decomposition along a path with branch continuity.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenPath:
    """Continuity-ordered eigenvalue/eigenvector branches along a time grid.

    values[m, k] and vectors[m, :, k] describe branch k at times[m]. Branches
    are ordered by descending eigenvalue at the first time and then followed
    by maximal-overlap matching; spectator branches whose eigenvalue never
    exceeds the support cutoff are dropped. flags carries warnings about
    near-degenerate stretches where the matching is ill-conditioned.
    """

    times: np.ndarray
    values: np.ndarray
    vectors: np.ndarray
    flags: tuple[str, ...] = ()

    @property
    def n_steps(self) -> int:
        return self.times.size - 1

    @property
    def n_branches(self) -> int:
        return self.values.shape[1]

    def subsample(self, stride: int) -> "EigenPath":
        return EigenPath(
            self.times[::stride],
            self.values[::stride],
            self.vectors[::stride],
            self.flags,
        )


_PERMS = np.array(list(itertools.permutations(range(4))))


def eigen_path(
    times: np.ndarray,
    rhos: np.ndarray,
    degeneracy_tol: float = DEGENERACY_TOL,
    support_tol: float = SUPPORT_TOL,
) -> EigenPath:
    """Spectrally decompose a time-ordered family of 4x4 density matrices.

    Validates Hermiticity, unit trace and positivity of every matrix, then
    assigns eigenvector columns across neighboring times by the permutation
    that maximizes the summed squared overlaps. Near-degenerate eigenvalue
    pairs among retained branches are flagged, not fatal.
    """
    times = np.asarray(times, dtype=float)
    rhos = np.asarray(rhos, dtype=complex)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("need at least two time points")
    if rhos.shape != (times.size, 4, 4):
        raise ValueError(f"expected shape {(times.size, 4, 4)}, got {rhos.shape}")
    herm = np.max(np.abs(rhos - np.conj(np.swapaxes(rhos, -1, -2))))
    if herm > HERMITICITY_TOL:
        raise ValueError(f"path contains non-Hermitian matrices: deviation {herm:g}")
    traces = np.einsum("mii->m", rhos)
    if np.max(np.abs(traces - 1.0)) > TRACE_TOL:
        raise ValueError("path contains matrices with trace away from 1")

    evals, evecs = np.linalg.eigh(rhos)
    if evals.min() < -POSITIVITY_TOL:
        raise ValueError(f"path contains negative eigenvalue {evals.min():g}")

    m_total = times.size
    order0 = np.argsort(evals[0])[::-1]

    # Squared overlaps between consecutive raw eigenframes, then the best
    # column permutation per step; identities of branches are composed along
    # the path afterwards.
    ov2 = np.abs(np.einsum("maf,mag->mfg", evecs[:-1].conj(), evecs[1:])) ** 2
    rows = np.broadcast_to(np.arange(4), _PERMS.shape)
    perm_scores = ov2[:, rows, _PERMS].sum(axis=2)  # (M-1, 24)
    best = np.argmax(perm_scores, axis=1)
    step_perm = _PERMS[best]

    col = np.empty((m_total, 4), dtype=int)
    col[0] = order0
    for m in range(m_total - 1):
        col[m + 1] = step_perm[m][col[m]]

    vals = np.take_along_axis(evals, col, axis=1)
    vecs = np.take_along_axis(evecs, col[:, None, :], axis=2)

    keep = np.flatnonzero(vals.max(axis=0) > support_tol)
    if keep.size == 0:
        raise ValueError("no branch carries weight above the support cutoff")
    vals = vals[:, keep]
    vecs = vecs[:, :, keep]

    flags: list[str] = []
    if vals.shape[1] >= 2:
        gaps = np.full(m_total, np.inf)
        for i, j in itertools.combinations(range(vals.shape[1]), 2):
            gaps = np.minimum(gaps, np.abs(vals[:, i] - vals[:, j]))
        close = gaps < degeneracy_tol
        if np.any(close):
            idx = np.flatnonzero(close)
            flags.append(
                "branch-ambiguity: eigenvalue gap below "
                f"{degeneracy_tol:g} on {idx.size} of {m_total} grid points, "
                f"t in [{times[idx[0]]:.6g}, {times[idx[-1]]:.6g}]"
            )
    return EigenPath(times, vals, vecs, tuple(flags))
