"""Quantum Gaudin hamiltonians for sl_2.

Two realisations of ``G_i = sum_{j != i} Omega_ij / (t_i - t_j)`` with the
Casimir tensor ``Omega = e(x)f + f(x)e + h(x)h/2``:

* exact matrices on a tensor product of irreducible representations;
* differential operators in ``x_1..x_N`` from ``f -> -d``, ``h -> 2xd + L``,
  ``e -> x^2 d + L x`` with symbolic weights ``L_i`` and points ``t_i``.

Irreps use the weight basis with the highest weight first:
``H v_k = (d-1-2k) v_k``, ``F v_k = v_{k+1}``, ``E v_k = k(d-k) v_{k-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

import numpy as np
import sympy

from .exactalg import Poly, RatFunc, WeylElement, as_fraction

__all__ = [
    "GaudinFamily",
    "Sl2Irrep",
    "casimir_action",
    "commutativity_check",
    "diagonal_action",
    "gaudin_operators",
    "gaudin_weyl",
    "sl2_irrep",
    "spectrum",
    "weyl_sl2",
]


def _zeros(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    out[...] = Fraction(0)
    return out


def _eye(n: int) -> np.ndarray:
    out = _zeros(n)
    for k in range(n):
        out[k, k] = Fraction(1)
    return out


def _is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.dot(b) - b.dot(a)


@dataclass(frozen=True)
class Sl2Irrep:
    d: int
    E: np.ndarray
    F: np.ndarray
    H: np.ndarray

    def casimir(self) -> np.ndarray:
        return self.E.dot(self.F) + self.F.dot(self.E) + self.H.dot(self.H) * Fraction(1, 2)

    def relations_hold(self) -> bool:
        E, F, H = self.E, self.F, self.H
        return (
            _is_zero(_commutator(E, F) - H)
            and _is_zero(_commutator(H, E) - 2 * E)
            and _is_zero(_commutator(H, F) + 2 * F)
        )


def sl2_irrep(d: int) -> Sl2Irrep:
    if not isinstance(d, int) or d < 1:
        raise ValueError("irrep dimension must be a positive integer")
    E, F, H = _zeros(d), _zeros(d), _zeros(d)
    for k in range(d):
        H[k, k] = Fraction(d - 1 - 2 * k)
        if k + 1 < d:
            F[k + 1, k] = Fraction(1)
        if k > 0:
            E[k - 1, k] = Fraction(k * (d - k))
    return Sl2Irrep(d, E, F, H)


def _kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def _embed(dims: Sequence[int], ops: dict[int, np.ndarray]) -> np.ndarray:
    """Tensor product with ``ops[slot]`` in the given slots and identities elsewhere."""
    return _kron_all([ops.get(k, _eye(d)) for k, d in enumerate(dims)])


def casimir_action(dims: Sequence[int], i: int, j: int) -> np.ndarray:
    """``Omega_ij`` on the tensor product (1-based slots)."""
    dims = list(dims)
    if i == j:
        raise ValueError("Omega_ii is not defined; need distinct slots")
    if not (1 <= i <= len(dims) and 1 <= j <= len(dims)):
        raise ValueError("slot index out of range")
    reps = [sl2_irrep(d) for d in dims]
    a, b = reps[i - 1], reps[j - 1]
    terms = [
        _embed(dims, {i - 1: a.E, j - 1: b.F}),
        _embed(dims, {i - 1: a.F, j - 1: b.E}),
        _embed(dims, {i - 1: a.H, j - 1: b.H}) * Fraction(1, 2),
    ]
    return terms[0] + terms[1] + terms[2]


def diagonal_action(dims: Sequence[int]) -> dict[str, np.ndarray]:
    """``Delta(x) = sum_k x^(k)`` for ``x`` in ``e, f, h``."""
    reps = [sl2_irrep(d) for d in dims]
    out = {}
    for name, attr in (("e", "E"), ("f", "F"), ("h", "H")):
        out[name] = sum(
            (_embed(dims, {k: getattr(r, attr)}) for k, r in enumerate(reps)),
            start=_zeros(int(np.prod(dims))),
        )
    return out


@dataclass
class GaudinFamily:
    dims: tuple
    points: tuple
    operators: list

    @property
    def n(self) -> int:
        return len(self.dims)


def gaudin_operators(dims: Sequence[int], points: Sequence, scale=1) -> GaudinFamily:
    """Gaudin matrices ``scale * sum_{j != i} Omega_ij / (t_i - t_j)``."""
    dims = tuple(int(d) for d in dims)
    points = tuple(as_fraction(t) for t in points)
    if len(dims) != len(points):
        raise ValueError("need one point per site")
    if len(dims) < 2:
        raise ValueError("need at least two sites")
    if len(set(points)) != len(points):
        raise ValueError("points must be pairwise distinct")
    scale = as_fraction(scale)
    omega = {}
    for i, j in combinations(range(1, len(dims) + 1), 2):
        omega[(i, j)] = omega[(j, i)] = casimir_action(dims, i, j)
    ops = []
    for i in range(1, len(dims) + 1):
        g = _zeros(int(np.prod(dims)))
        for j in range(1, len(dims) + 1):
            if j != i:
                g = g + omega[(i, j)] * (scale / (points[i - 1] - points[j - 1]))
        ops.append(g)
    return GaudinFamily(dims, points, ops)


def _integral(mats: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Rescale by one common denominator to Python-int matrices.

    Vanishing of commutators is unaffected by scaling, and integer
    arithmetic is far cheaper than Fraction arithmetic.
    """
    den = lcm(*(x.denominator for m in mats for x in m.flat))
    return [np.vectorize(lambda x: int(x * den), otypes=[object])(m) for m in mats]


def commutativity_check(family: GaudinFamily) -> dict:
    pairs = []
    diag = diagonal_action(family.dims)
    ops = _integral(family.operators)
    diag = dict(zip(diag, _integral(list(diag.values()))))
    for i, j in combinations(range(family.n), 2):
        c = _commutator(ops[i], ops[j])
        nonzero = sum(1 for x in c.flat if x != 0)
        pairs.append({"i": i + 1, "j": j + 1, "zero": nonzero == 0, "nonzero_entries": nonzero})
    diagonal = []
    for i, g in enumerate(ops):
        for name, x in diag.items():
            diagonal.append({"i": i + 1, "x": name, "zero": _is_zero(_commutator(g, x))})
    return {
        "dims": list(family.dims),
        "points": list(family.points),
        "pairs": pairs,
        "diagonal_sl2": all(d["zero"] for d in diagonal),
        "diagonal": diagonal,
        "pass": all(p["zero"] for p in pairs) and all(d["zero"] for d in diagonal),
    }


def _to_sympy(m: np.ndarray) -> sympy.Matrix:
    return sympy.Matrix(m.shape[0], m.shape[1], [sympy.Rational(x.numerator, x.denominator) for x in m.flat])


def spectrum(family: GaudinFamily) -> dict:
    """Characteristic polynomials of each ``G_i`` on the singular vectors of each weight.

    A singular vector of weight ``w`` is killed by ``Delta(e)``; these spaces
    are preserved by every ``G_i`` and together determine the full spectrum.
    """
    diag = diagonal_action(family.dims)
    e = _to_sympy(diag["e"])
    weights = [diag["h"][k, k] for k in range(diag["h"].shape[0])]
    lam = sympy.Symbol("x")
    blocks = []
    for w in sorted({w for w in weights if w >= 0}, reverse=True):
        idx = [k for k, v in enumerate(weights) if v == w]
        sub = e.extract(list(range(e.rows)), idx)
        kernel = sub.nullspace()
        if not kernel:
            continue
        basis = sympy.Matrix.hstack(*kernel)
        # full column-space coordinates of the singular vectors
        full = sympy.zeros(e.rows, basis.cols)
        for r, k in enumerate(idx):
            full[k, :] = basis[r, :]
        pinv = (full.T * full).inv() * full.T
        polys = []
        for g in family.operators:
            block = pinv * _to_sympy(g) * full
            coeffs = block.charpoly(lam).all_coeffs()
            polys.append([Fraction(int(c.p), int(c.q)) for c in coeffs])
        blocks.append({"weight": int(w), "multiplicity": basis.cols, "charpolys": polys})
    return {"dims": list(family.dims), "points": list(family.points), "blocks": blocks}


# -- Weyl-algebra realisation ------------------------------------------------

def weyl_sl2(n: int, site: int, weight) -> dict[str, WeylElement]:
    """``e, f, h`` at ``site`` (0-based) acting on polynomials in ``x_1..x_n``."""
    x = WeylElement.x(n, site)
    d = WeylElement.d(n, site)
    lam = RatFunc.coerce(weight)
    return {
        "e": x * x * d + x * lam,
        "f": -d,
        "h": x * d * 2 + WeylElement.scalar(n, lam),
    }


def gaudin_weyl(n: int, i: int, weights: Sequence | None = None, points: Sequence | None = None) -> WeylElement:
    """``G_i`` (1-based) as a normal-ordered differential operator.

    By default the weights ``L1..Ln`` and points ``t1..tn`` are free symbols.
    """
    if not 1 <= i <= n:
        raise ValueError("site index out of range")
    weights = list(weights) if weights is not None else [Poly.var(f"L{k + 1}") for k in range(n)]
    points = list(points) if points is not None else [Poly.var(f"t{k + 1}") for k in range(n)]
    sites = [weyl_sl2(n, k, weights[k]) for k in range(n)]
    a = sites[i - 1]
    total = WeylElement(n)
    for j in range(1, n + 1):
        if j == i:
            continue
        b = sites[j - 1]
        omega = a["e"] * b["f"] + a["f"] * b["e"] + a["h"] * b["h"] * Fraction(1, 2)
        total = total + omega / (RatFunc.coerce(points[i - 1]) - RatFunc.coerce(points[j - 1]))
    return total
