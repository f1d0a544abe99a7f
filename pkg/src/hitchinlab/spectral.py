"""Spectral curves of rank-2 Garnier Higgs fields and genus arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .garnier import GarnierData, PhaseState, Trajectory, residue_matrices

__all__ = [
    "SpectralCurve",
    "degree",
    "is_square_free",
    "spectral_coefficients",
    "hitchin_base_dim",
    "hyperelliptic_genus",
    "isospectrality_check",
    "riemann_hurwitz_genus",
    "spectral_curve",
]


# -- dense univariate polynomials, lowest degree first ----------------------

def _trim(a: list, exact: bool = True) -> list:
    a = list(a)
    while a and (a[-1] == 0 if exact else False):
        a.pop()
    return a


def _add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _scale(a, c):
    return [c * x for x in a]


def _divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(_trim(r)) >= len(b):
        r = _trim(r)
        shift = len(r) - len(b)
        f = Fraction(r[-1]) / b[-1]
        q[shift] = f
        for i, y in enumerate(b):
            r[i + shift] -= f * y
        r.pop()
    return _trim(q), _trim(r)


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    return _scale(a, 1 / Fraction(a[-1])) if a else a


def _deriv(a):
    return [k * c for k, c in enumerate(a)][1:]


def _from_roots(roots) -> list:
    out = [Fraction(1)]
    for r in roots:
        out = _mul(out, [-r, 1])
    return out


def degree(a: Sequence) -> int:
    return len(_trim(a)) - 1


def is_square_free(f: Sequence) -> bool:
    return degree(_gcd(list(f), _deriv(list(f)))) == 0


@dataclass
class SpectralCurve:
    """``y^2 = a(z) b(z)`` with ``det phi = a/b`` and ``b = prod (z - t_i)``.

    Coefficient lists run from the constant term upwards.  The eigenvalues
    ``mu`` of the Higgs field satisfy ``mu^2 = -a/b``; the sign does not
    affect the genus.
    """

    a: list
    b: list
    genus: int | None

    @property
    def degenerate(self) -> bool:
        return not _trim(self.a)

    def to_json(self) -> dict:
        return {
            "a": [str(c) for c in self.a],
            "b": [str(c) for c in self.b],
            "deg_a": degree(self.a),
            "deg_b": degree(self.b),
            "genus": self.genus,
        }


def _numerators(data: GarnierData, state: PhaseState, exact: bool):
    """``phi(z) = P(z)/b(z)`` entrywise; returns (P entries, b)."""
    mats = residue_matrices(data)
    vals = state.as_values()
    t = list(data.t) if exact else [float(v) for v in data.t]
    if not exact:
        vals = {k: float(v) for k, v in vals.items()}
    one = Fraction(1) if exact else 1.0
    b = [one]
    for ti in t:
        b = _mul(b, [-ti, one])
    cof = []
    for i in range(data.n):
        c = [one]
        for j, tj in enumerate(t):
            if j != i:
                c = _mul(c, [-tj, one])
        cof.append(c)
    entries = [[[], []], [[], []]]
    for i, A in enumerate(mats):
        for r in range(2):
            for s in range(2):
                v = A[r][s].evaluate(vals) if not A[r][s].is_constant() else A[r][s].constant_value()
                v = v if exact else float(v)
                entries[r][s] = _add(entries[r][s], _scale(cof[i], v))
    return entries, b


def spectral_curve(data: GarnierData, state: PhaseState) -> SpectralCurve:
    """Exact spectral curve of the Garnier Higgs field at a rational state."""
    if data.symbolic:
        raise ValueError("spectral curve needs numeric twist parameters")
    P, b = _numerators(data, state, exact=True)
    top = _add(_mul(P[0][0], P[1][1]), _scale(_mul(P[0][1], P[1][0]), -1))
    a, rem = _divmod(top, b)
    if rem:
        raise ValueError("det phi has non-simple poles at the marked points")
    a = _trim(a)
    genus = None
    if a:
        genus = hyperelliptic_genus(a, b)
    return SpectralCurve(a, b, genus)


def spectral_coefficients(data: GarnierData, y: Sequence[float], p: Sequence[float]) -> np.ndarray:
    """Floating coefficients of ``a(z)`` (all ``N-1`` of them, constant term first)."""
    P, b = _numerators(data, PhaseState(list(y), list(p)), exact=False)
    top = np.polynomial.polynomial.polysub(
        np.polynomial.polynomial.polymul(P[0][0], P[1][1]),
        np.polynomial.polynomial.polymul(P[0][1], P[1][0]),
    )
    q, _ = np.polynomial.polynomial.polydiv(top, np.array(b, dtype=float))
    out = np.zeros(data.n - 1)
    out[: min(len(q), data.n - 1)] = q[: data.n - 1]
    return out


def hyperelliptic_genus(a: Sequence, b: Sequence) -> int:
    """Genus of the smooth model of ``y^2 = a(z) b(z)``.

    With ``d = deg(ab)`` there are ``d`` finite branch points, plus one at
    infinity when ``d`` is odd, so the genus is ``ceil(d/2) - 1``.
    """
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    if not a or not b:
        raise ValueError("zero polynomial: the curve is degenerate")
    if degree(_gcd(a, b)) > 0:
        raise ValueError("a and b share a root")
    f = _mul(a, b)
    d = degree(f)
    if d < 1:
        raise ValueError("constant right-hand side: no branch points")
    if not is_square_free(f):
        raise ValueError("a*b has a repeated root; the curve is singular")
    return (d + 1) // 2 - 1


def riemann_hurwitz_genus(n: int, g: int, branch_points: int) -> int:
    """Genus of a degree-``n`` cover of a genus-``g`` curve, totally ramified over each branch point."""
    if n < 1 or g < 0 or branch_points < 0:
        raise ValueError("need n >= 1, g >= 0 and a non-negative branch point count")
    chi = n * (2 - 2 * g - branch_points) + branch_points
    if chi % 2:
        raise ValueError(f"odd Euler characteristic {chi}: inconsistent input")
    return (2 - chi) // 2


def isospectrality_check(data: GarnierData, trajectory: Trajectory, tol: float = 1e-8) -> dict:
    """Maximum drift of each coefficient of ``a(z)`` along a trajectory."""
    coeffs = np.array([spectral_coefficients(data, y, p) for y, p in zip(trajectory.y, trajectory.p)])
    drift = np.max(np.abs(coeffs - coeffs[0]), axis=0)
    return {
        "coefficient_drift": [float(v) for v in drift],
        "max_drift": float(np.max(drift)),
        "tol": tol,
        "pass": bool(np.max(drift) < tol),
    }


def hitchin_base_dim(degrees: Sequence[int], g: int) -> int:
    """Dimension of the Hitchin base: ``g`` for a degree-1 invariant, ``(2d-1)(g-1)`` otherwise."""
    if g < 2:
        raise ValueError("Hitchin base dimension formula needs genus g >= 2")
    if not degrees:
        raise ValueError("need at least one invariant degree")
    return sum(g if d == 1 else (2 * d - 1) * (g - 1) for d in degrees)

