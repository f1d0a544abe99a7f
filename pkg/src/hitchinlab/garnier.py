"""Garnier and twisted Garnier systems.

Phase space coordinates are ``y1..yN`` (positions of the parabolic lines)
and ``p1..pN`` (momenta), with ``{p_i, y_i} = +1``.  Marked points ``t_i``
are exact rationals.  Twist parameters ``lambda_i`` are either rationals
or free symbols ``lam1..lamN``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactalg import Poly, RatFunc, as_fraction, poisson_bracket, reduce_mod_ideal

__all__ = [
    "FlowError",
    "GarnierData",
    "PhaseState",
    "Trajectory",
    "check_involution",
    "constrained_state",
    "garnier_hamiltonians",
    "hamilton_flow",
    "moment_constraints",
    "residue_matrices",
    "sum_identities_check",
    "trace_pairing",
]


class FlowError(RuntimeError):
    """Fixed-point iteration failed to converge at some integration step."""

    def __init__(self, message: str, step_index: int):
        super().__init__(f"{message} (step {step_index})")
        self.step_index = step_index


def ynames(n: int) -> list[str]:
    return [f"y{i + 1}" for i in range(n)]


def pnames(n: int) -> list[str]:
    return [f"p{i + 1}" for i in range(n)]


def lamnames(n: int) -> list[str]:
    return [f"lam{i + 1}" for i in range(n)]


@dataclass(frozen=True)
class GarnierData:
    """Marked points and twist parameters.

    ``lam=None`` is the untwisted system; ``symbolic=True`` makes every
    twist parameter a free symbol ``lam_i``.
    """

    t: tuple
    lam: tuple | None = None
    symbolic: bool = False

    def __post_init__(self):
        t = tuple(as_fraction(v) for v in self.t)
        object.__setattr__(self, "t", t)
        if len(t) < 4:
            raise ValueError("Garnier data needs N >= 4 marked points")
        if len(set(t)) != len(t):
            raise ValueError("marked points t_i must be pairwise distinct")
        if self.lam is not None:
            lam = tuple(as_fraction(v) for v in self.lam)
            if len(lam) != len(t):
                raise ValueError("need one twist parameter per marked point")
            object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def twisted(self) -> bool:
        return self.symbolic or (self.lam is not None and any(self.lam))

    def lambdas(self) -> list[Poly]:
        if self.symbolic:
            return [Poly.var(name) for name in lamnames(self.n)]
        if self.lam is None:
            return [Poly.const(0)] * self.n
        return [Poly.const(v) for v in self.lam]

    def pairs(self) -> list[tuple[str, str]]:
        return list(zip(ynames(self.n), pnames(self.n)))

    def params(self) -> list[str]:
        return lamnames(self.n) if self.symbolic else []


@dataclass
class PhaseState:
    y: list
    p: list

    def __post_init__(self):
        if len(self.y) != len(self.p):
            raise ValueError("positions and momenta must have equal length")

    def as_values(self) -> dict[str, object]:
        n = len(self.y)
        return {**dict(zip(ynames(n), self.y)), **dict(zip(pnames(n), self.p))}


def residue_matrices(data: GarnierData) -> list[tuple[tuple[Poly, Poly], tuple[Poly, Poly]]]:
    """Residues ``A_i`` of the Higgs field at the marked points.

    ``A_i = [[-lam_i + p_i y_i, 2 lam_i y_i - p_i y_i^2], [p_i, lam_i - p_i y_i]]``,
    which is ``p_i [[y_i, -y_i^2], [1, -y_i]]`` when ``lam_i = 0``.
    """
    out = []
    for yn, pn, lam in zip(ynames(data.n), pnames(data.n), data.lambdas()):
        y, p = Poly.var(yn), Poly.var(pn)
        out.append(((-lam + p * y, 2 * lam * y - p * y * y), (p, lam - p * y)))
    return out


def mat_mul(a, b):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(2)), Poly.const(0)) for j in range(2)) for i in range(2))


def mat_trace(a):
    return a[0][0] + a[1][1]


def mat_det(a):
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def trace_pairing(data: GarnierData, i: int, j: int) -> Poly:
    """Closed form of ``tr(A_i A_j)`` (0-based indices)."""
    y = [Poly.var(v) for v in ynames(data.n)]
    p = [Poly.var(v) for v in pnames(data.n)]
    lam = data.lambdas()
    dy = y[i] - y[j]
    return -(dy * dy) * p[i] * p[j] + 2 * (lam[i] * p[j] - lam[j] * p[i]) * dy + 2 * lam[i] * lam[j]


def garnier_hamiltonians(data: GarnierData) -> list[RatFunc]:
    """``G_i = sum_{j != i} [(y_i-y_j)^2 p_i p_j - 2(lam_i p_j - lam_j p_i)(y_i-y_j) - 2 lam_i lam_j] / (t_j - t_i)``."""
    n = data.n
    y = [Poly.var(v) for v in ynames(n)]
    p = [Poly.var(v) for v in pnames(n)]
    lam = data.lambdas()
    hams = []
    for i in range(n):
        total = Poly.const(0)
        for j in range(n):
            if j == i:
                continue
            dy = y[i] - y[j]
            numer = dy * dy * p[i] * p[j] - 2 * (lam[i] * p[j] - lam[j] * p[i]) * dy - 2 * lam[i] * lam[j]
            total = total + numer * (1 / (data.t[j] - data.t[i]))
        hams.append(RatFunc(total))
    return hams


def check_involution(data: GarnierData, max_exact_n: int = 6) -> dict:
    """Exact brackets ``{G_i, G_j}`` for every pair ``i < j``."""
    if data.n > max_exact_n:
        raise ValueError(f"exact involution check limited to N <= {max_exact_n}")
    hams = [h.as_poly() for h in garnier_hamiltonians(data)]
    pairs = data.pairs()
    params = data.params()
    entries = []
    for i in range(data.n):
        for j in range(i + 1, data.n):
            b = poisson_bracket(hams[i], hams[j], pairs, params)
            entries.append({"i": i + 1, "j": j + 1, "zero": b.is_zero(), "terms": len(b.terms)})
    return {
        "n": data.n,
        "twisted": data.twisted,
        "symbolic_lambda": data.symbolic,
        "pairs": entries,
        "all_zero": all(e["zero"] for e in entries),
    }


def moment_constraints(state: PhaseState) -> tuple:
    """``(sum p_i, sum p_i y_i, sum p_i y_i^2)``."""
    s0 = sum(state.p[i] for i in range(len(state.p)))
    s1 = sum(state.p[i] * state.y[i] for i in range(len(state.p)))
    s2 = sum(state.p[i] * state.y[i] ** 2 for i in range(len(state.p)))
    return (s0, s1, s2)


def constraint_generators(n: int) -> list[Poly]:
    y = [Poly.var(v) for v in ynames(n)]
    p = [Poly.var(v) for v in pnames(n)]
    return [
        sum(p, Poly.const(0)),
        sum((pi * yi for pi, yi in zip(p, y)), Poly.const(0)),
        sum((pi * yi * yi for pi, yi in zip(p, y)), Poly.const(0)),
    ]


def constrained_state(n: int, rng: random.Random | None = None, *, exact: bool = True, scale: float = 1.0) -> PhaseState:
    """Random state satisfying the three moment constraints.

    Positions and the first ``n-3`` momenta are drawn at random; the last
    three momenta solve the (Vandermonde) linear system.  Floating states
    are rescaled so that ``max |p_i| = scale``.
    """
    rng = rng or random.Random(0)
    if exact:
        ys: list = []
        while len(ys) < n:
            v = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
            if v not in ys:
                ys.append(v)
        ps = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n - 3)]
    else:
        ys = sorted(rng.uniform(-1.5, 1.5) for _ in range(n))
        ps = [scale * rng.uniform(-1, 1) for _ in range(n - 3)]
    rhs = [-sum(p * ys[i] ** k for i, p in enumerate(ps)) for k in range(3)]
    tail = ys[n - 3:]
    mat = [[tail[c] ** k for c in range(3)] for k in range(3)]
    sol = _solve3(mat, rhs)
    p = list(ps) + list(sol)
    if not exact:
        # constraints are linear in p, so rescaling keeps the state admissible
        top = max(abs(v) for v in p)
        p = [scale * v / top for v in p]
    return PhaseState(list(ys), p)


def _solve3(mat, rhs):
    a = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(a[r][col]))
        a[col], a[piv] = a[piv], a[col]
        for r in range(3):
            if r != col and a[r][col]:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * yv for x, yv in zip(a[r], a[col])]
    return [a[i][3] / a[i][i] for i in range(3)]


def sum_identities_check(
    data: GarnierData,
    samples: int = 3,
    off_shell: PhaseState | None = None,
    seed: int = 0,
) -> dict:
    """Check ``sum G_i = sum t_i G_i = sum t_i^2 G_i = 0`` on the constraint locus."""
    if data.twisted:
        raise ValueError("sum identities hold for the untwisted system only")
    n = data.n
    hams = garnier_hamiltonians(data)
    combos = {
        f"sum t^{k} G": sum((h * (t**k) for h, t in zip(hams, data.t)), RatFunc(0)) for k in range(3)
    }
    gens = constraint_generators(n)
    reductions = {name: reduce_mod_ideal(f, gens, pnames(n)) for name, f in combos.items()}
    rng = random.Random(seed)
    sample_values = []
    for _ in range(samples):
        st = constrained_state(n, rng)
        vals = st.as_values()
        sample_values.append({name: f.evaluate(vals) for name, f in combos.items()})
    report = {
        "n": n,
        "reductions": {name: {"zero": r.is_zero(), "normal_form": str(r)} for name, r in reductions.items()},
        "samples": [{name: str(v) for name, v in s.items()} for s in sample_values],
        "samples_zero": all(v == 0 for s in sample_values for v in s.values()),
    }
    if off_shell is not None:
        vals = off_shell.as_values()
        residual = moment_constraints(off_shell)
        report["off_shell"] = {
            "constraints": [str(v) for v in residual],
            "on_shell": all(v == 0 for v in residual),
            "values": {name: str(f.evaluate(vals)) for name, f in combos.items()},
            # sum G_i vanishes identically (each pair cancels), so the
            # off-shell witness is the first moment
            "nonzero": [name for name, f in combos.items() if f.evaluate(vals) != 0],
        }
    report["all_zero"] = all(r.is_zero() for r in reductions.values()) and report["samples_zero"]
    return report


# -- numerics ---------------------------------------------------------------

class CompiledPoly:
    """Vectorised float evaluation of a polynomial in a fixed variable order."""

    def __init__(self, f: Poly, names: Sequence[str]):
        from .exactalg.poly import var_index

        position = {var_index(nm): k for k, nm in enumerate(names)}
        extra = f.variables() - set(names)
        if extra:
            raise ValueError(f"cannot evaluate numerically: free symbols {sorted(extra)}")
        items = list(f.items())
        self.exps = np.zeros((len(items), len(names)), dtype=np.int64)
        self.coef = np.zeros(len(items), dtype=float)
        for r, (m, c) in enumerate(items):
            self.coef[r] = float(c)
            for v, e in m:
                self.exps[r, position[v]] = e

    def __call__(self, z: np.ndarray) -> float:
        if not len(self.coef):
            return 0.0
        return float(np.prod(z[None, :] ** self.exps, axis=1) @ self.coef)


@dataclass
class Trajectory:
    times: np.ndarray
    y: np.ndarray
    p: np.ndarray
    hamiltonians: np.ndarray  # shape (steps + 1, N)
    constraints: np.ndarray  # shape (steps + 1, 3)
    iterations: list = field(default_factory=list)

    def drift(self) -> np.ndarray:
        return np.max(np.abs(self.hamiltonians - self.hamiltonians[0]), axis=0)

    def constraint_drift(self) -> np.ndarray:
        return np.max(np.abs(self.constraints - self.constraints[0]), axis=0)

    def report(self) -> dict:
        return {
            "steps": len(self.times) - 1,
            "t_end": float(self.times[-1]),
            "hamiltonian_drift": [float(v) for v in self.drift()],
            "max_hamiltonian_drift": float(np.max(self.drift())),
            "constraint_drift": [float(v) for v in self.constraint_drift()],
            "max_fixed_point_iterations": max(self.iterations) if self.iterations else 0,
        }


class GarnierVectorField:
    """Compiled Hamilton equations ``y' = dG/dp, p' = -dG/dy`` for one ``G_k``."""

    def __init__(self, data: GarnierData, index: int, sign: int = 1):
        if data.symbolic:
            raise ValueError("numerical flows need numeric twist parameters")
        n = data.n
        self.n = n
        self.names = ynames(n) + pnames(n)
        hams = [h.as_poly() for h in garnier_hamiltonians(data)]
        if not 1 <= index <= n:
            raise ValueError(f"hamiltonian index must be in 1..{n}")
        g = hams[index - 1]
        self.hams = [CompiledPoly(h, self.names) for h in hams]
        self.dy = [CompiledPoly(g.diff(p), self.names) for p in pnames(n)]
        self.dp = [CompiledPoly(-g.diff(y), self.names) for y in ynames(n)]
        # sign=-1 flips only the position equation: a deliberately broken flow
        self.sign = sign

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return np.array([self.sign * f(z) for f in self.dy] + [f(z) for f in self.dp])

    def values(self, z: np.ndarray) -> np.ndarray:
        return np.array([h(z) for h in self.hams])


def implicit_midpoint(rhs, z0: np.ndarray, step: float, nsteps: int, tol: float = 1e-13, max_iter: int = 50):
    """Implicit midpoint rule solved by fixed-point iteration; yields (state, iterations)."""
    z = np.array(z0, dtype=float)
    for k in range(nsteps):
        znew = z + step * rhs(z)
        for it in range(1, max_iter + 1):
            cand = z + step * rhs(0.5 * (z + znew))
            if not np.all(np.isfinite(cand)):
                raise FlowError("implicit midpoint iterate is not finite", k + 1)
            delta = np.max(np.abs(cand - znew))
            znew = cand
            if delta <= tol * max(1.0, np.max(np.abs(znew))):
                break
        else:
            raise FlowError("implicit midpoint fixed-point iteration did not converge", k + 1)
        z = znew
        yield z, it


def hamilton_flow(
    data: GarnierData,
    h_index: int,
    state: PhaseState,
    t_end: float,
    step: float,
    *,
    sign: int = 1,
    tol: float = 1e-13,
    max_iter: int = 50,
) -> Trajectory:
    """Integrate the flow of ``G_{h_index}`` with the implicit midpoint rule."""
    if step <= 0:
        raise ValueError("step must be positive")
    field_ = GarnierVectorField(data, h_index, sign)
    n = data.n
    z0 = np.array([float(v) for v in state.y] + [float(v) for v in state.p])
    nsteps = int(round(t_end / step))
    zs = [z0]
    its = []
    for z, it in implicit_midpoint(field_, z0, step, nsteps, tol, max_iter):
        zs.append(z)
        its.append(it)
    zs = np.array(zs)
    ham = np.array([field_.values(z) for z in zs])
    cons = np.array([moment_constraints(PhaseState(list(z[:n]), list(z[n:]))) for z in zs])
    return Trajectory(np.arange(nsteps + 1) * step, zs[:, :n], zs[:, n:], ham, cons, its)
