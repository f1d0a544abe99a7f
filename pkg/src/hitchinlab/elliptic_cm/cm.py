"""Elliptic Calogero-Moser system through Krichever's Lax matrix.

Conventions: ``{p_i, q_j} = delta_ij`` as in the Garnier module, so the
flow of ``H`` is ``q' = dH/dp``, ``p' = -dH/dq``.  For the quadratic
hamiltonian ``H2 = sum p^2 - c^2 sum_{i != j} wp(q_i - q_j)`` this gives
``q_i' = 2 p_i`` and ``p_i' = 2 c^2 sum_{j != i} wp'(q_i - q_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..garnier import FlowError
from .functions import Torus, reduce_to_cell, theta, theta_prime0, wp, wp_prime

__all__ = [
    "CMState",
    "CMTrajectory",
    "CollisionError",
    "FitError",
    "FlowError",
    "cm_flow",
    "cm_hamiltonians",
    "cm_lax",
    "h2_direct",
    "trace_power_constant",
]

COLLISION_THRESHOLD = 1e-6


class CollisionError(RuntimeError):
    """Two particles met (modulo the lattice); ``trajectory`` holds the steps done so far."""

    def __init__(self, message: str, step_index: int, trajectory: "CMTrajectory | None" = None):
        super().__init__(message)
        self.step_index = step_index
        self.trajectory = trajectory


class FitError(ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


@dataclass
class CMState:
    q: np.ndarray
    p: np.ndarray
    c: complex = 1.0

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=complex).copy()
        self.p = np.asarray(self.p, dtype=complex).copy()
        self.c = complex(self.c)
        if self.q.shape != self.p.shape or self.q.ndim != 1:
            raise ValueError("q and p must be vectors of equal length")
        if self.n < 2:
            raise ValueError("need at least two particles")

    @property
    def n(self) -> int:
        return len(self.q)

    def check_distinct(self, torus: Torus, threshold: float = COLLISION_THRESHOLD) -> None:
        gap = self.min_separation(torus)
        if gap < threshold:
            raise CollisionError(f"particles closer than {threshold:g} modulo the lattice", 0)

    def min_separation(self, torus: Torus) -> float:
        d = self.q[:, None] - self.q[None, :]
        iu = np.triu_indices(self.n, 1)
        return float(np.min(np.abs(reduce_to_cell(d[iu], torus))))


def cm_lax(state: CMState, z, torus: Torus) -> np.ndarray:
    """``phi_ij = c theta'(0) theta(z + q_ij) / (theta(z) theta(q_ij))``, ``phi_ii = p_i``.

    ``z`` may be an array; the result then has shape ``z.shape + (n, n)``.
    """
    state.check_distinct(torus)
    n = state.n
    z = np.asarray(z, dtype=complex)
    phi = np.zeros(z.shape + (n, n), dtype=complex)
    idx = np.arange(n)
    phi[..., idx, idx] = state.p
    if state.c == 0:
        return phi
    tz = theta(z, torus)
    if np.any(np.abs(tz) < 1e-300):
        raise ZeroDivisionError("spectral parameter on the lattice")
    t0 = theta_prime0(torus)
    rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    d = state.q[rows] - state.q[cols]
    num = theta(z[..., None] + d, torus)
    phi[..., rows, cols] = state.c * t0 * num / (np.asarray(tz)[..., None] * theta(d, torus))
    return phi


def h2_direct(state: CMState, torus: Torus) -> complex:
    """``sum p^2 - c^2 sum_{i != j} wp(q_i - q_j)``."""
    d = state.q[:, None] - state.q[None, :]
    off = ~np.eye(state.n, dtype=bool)
    return complex(np.sum(state.p**2) - state.c**2 * np.sum(wp(d[off], torus)))


def trace_power_constant(
    state: CMState,
    torus: Torus,
    k: int,
    radius: float | None = None,
    samples: int = 64,
    tol: float = 1e-7,
) -> complex:
    """Constant term of the Laurent expansion of ``tr phi(z)^k`` at ``z = 0``.

    Averages over a circle of ``samples`` points; the same average on a
    circle of half the radius must agree within ``tol`` (relative), else
    :class:`FitError`.
    """
    r = radius or 0.1 * torus.scale
    vals = []
    for rad in (r, r / 2):
        ang = 2 * np.pi * (np.arange(samples) + 0.5) / samples
        zs = rad * np.exp(1j * ang)
        traces = np.trace(np.linalg.matrix_power(cm_lax(state, zs, torus), k), axis1=-2, axis2=-1)
        vals.append(complex(np.mean(traces)))
    resid = abs(vals[0] - vals[1]) / max(1.0, abs(vals[0]))
    if resid > tol:
        raise FitError(f"Laurent fit of tr phi^{k} unstable", resid)
    return vals[0]


def cm_hamiltonians(state: CMState, torus: Torus, k_max: int, **fit) -> list[complex]:
    """``[H_1, ..., H_k_max]``; ``H_1, H_2`` in closed form, the rest by circle fit."""
    if not 1 <= k_max <= state.n:
        raise ValueError("need 1 <= k_max <= n")
    out = [complex(np.sum(state.p))]
    if k_max >= 2:
        out.append(h2_direct(state, torus))
    for k in range(3, k_max + 1):
        out.append(trace_power_constant(state, torus, k, **fit))
    return out


@dataclass
class CMTrajectory:
    times: list = field(default_factory=list)
    q: list = field(default_factory=list)
    p: list = field(default_factory=list)
    hamiltonians: list = field(default_factory=list)

    def drift(self) -> list[float]:
        h = np.array(self.hamiltonians)
        return [float(v) for v in np.max(np.abs(h - h[0]), axis=0)]

    def report(self) -> dict:
        return {
            "steps": len(self.times) - 1,
            "t_end": float(self.times[-1]),
            "drift": {f"H{k + 1}": v for k, v in enumerate(self.drift())},
        }


def _rhs(q, p, c, torus):
    d = q[:, None] - q[None, :]
    off = ~np.eye(len(q), dtype=bool)
    force = np.zeros_like(d)
    force[off] = wp_prime(d[off], torus)
    return 2 * p, 2 * c**2 * force.sum(axis=1)


def cm_flow(
    state: CMState,
    torus: Torus,
    t_end: float,
    step: float,
    tol: float = 1e-13,
    max_iter: int = 50,
    track: int | None = None,
    record_every: int = 1,
) -> CMTrajectory:
    """Implicit-midpoint integration of the H2 flow.

    Tracks ``H_1 .. H_track`` (default ``min(n, 3)``) at every recorded step.
    """
    if step <= 0 or t_end < 0:
        raise ValueError("need step > 0 and t_end >= 0")
    state.check_distinct(torus)
    track = track or min(state.n, 3)
    nsteps = int(round(t_end / step))
    c = state.c
    q, p = state.q.copy(), state.p.copy()
    traj = CMTrajectory()

    def record(t, q, p):
        s = CMState(q, p, c)
        traj.times.append(t)
        traj.q.append(q.copy())
        traj.p.append(p.copy())
        traj.hamiltonians.append(cm_hamiltonians(s, torus, track))

    record(0.0, q, p)
    if c == 0:
        # free motion
        for k in range(1, nsteps + 1):
            q = q + 2 * p * step
            if CMState(q, p, c).min_separation(torus) < COLLISION_THRESHOLD:
                raise CollisionError("particles collided", k, traj)
            if k % record_every == 0 or k == nsteps:
                record(k * step, q, p)
        return traj
    for k in range(1, nsteps + 1):
        dq, dp = _rhs(q, p, c, torus)
        q1, p1 = q + step * dq, p + step * dp
        for _ in range(max_iter):
            dq, dp = _rhs((q + q1) / 2, (p + p1) / 2, c, torus)
            q2, p2 = q + step * dq, p + step * dp
            err = max(np.max(np.abs(q2 - q1)), np.max(np.abs(p2 - p1)))
            q1, p1 = q2, p2
            if err < tol * max(1.0, np.max(np.abs(q1)), np.max(np.abs(p1))):
                break
        else:
            raise FlowError("implicit midpoint iteration did not converge", k)
        q, p = q1, p1
        if CMState(q, p, c).min_separation(torus) < COLLISION_THRESHOLD:
            raise CollisionError("particles collided", k, traj)
        if k % record_every == 0 or k == nsteps:
            record(k * step, q, p)
    return traj
