"""Hill operators ``d^2 + u`` on the formal disk and their coordinate changes.

The operator acts from ``K^(-1/2)`` to ``K^(3/2)``: a solution ``psi(t)``
is a half-density ``psi(t) (dt)^(-1/2)``.  In a new coordinate ``s`` with
inverse ``t = t(s)`` the same section is ``psi(t(s)) t'(s)^(-1/2)``, and it
solves ``d_s^2 + v`` with

    v(s) = u(t(s)) t'(s)^2 + D(t)(s) / 2,

``D`` being the Schwarzian derivative.  The law was fixed by transporting a
basis of solutions (see :func:`transported_solutions`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import DEFAULT_ORDER, Series

__all__ = [
    "CoordinateChange",
    "HillOperator",
    "mobius_series",
    "schwarzian",
    "solve_hill",
    "transform_hill",
    "transported_solutions",
    "wronskian",
]


@dataclass(frozen=True)
class HillOperator:
    u: Series

    @property
    def order(self) -> int:
        return self.u.order


@dataclass(frozen=True)
class CoordinateChange:
    s: Series

    def __post_init__(self):
        if self.s.order < 1 or self.s[1] == 0:
            raise ValueError("coordinate change needs s'(0) != 0")

    @property
    def order(self) -> int:
        return self.s.order

    def inverse(self) -> "CoordinateChange":
        if self.s[0] != 0:
            raise ValueError("inverse needs s(0) = 0")
        return CoordinateChange(self.s.reversion())

    def then(self, other: "CoordinateChange") -> "CoordinateChange":
        """``other o self``: first ``t -> s``, then ``s -> r``."""
        return CoordinateChange(other.s.compose(self.s))


def _as_change(s) -> CoordinateChange:
    return s if isinstance(s, CoordinateChange) else CoordinateChange(s)


def schwarzian(s) -> Series:
    """``D(s) = s'''/s' - (3/2) (s''/s')^2``; the result has order ``K - 3``."""
    s = _as_change(s).s
    if s.order < 3:
        raise ValueError("need a series of order >= 3")
    d1 = s.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    inv = d1.truncate(d3.order).reciprocal()
    ratio = d2.truncate(d3.order) * inv
    return d3 * inv - ratio * ratio * Fraction(3, 2)


def mobius_series(a, b, c, d, order: int = DEFAULT_ORDER) -> Series:
    """Expansion of ``(a t + b)/(c t + d)`` at ``t = 0`` (needs ``d != 0``)."""
    a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    if d == 0:
        raise ValueError("need d != 0 to expand at t = 0")
    if a * d - b * c == 0:
        raise ValueError("degenerate Mobius transformation")
    return Series([b, a], order) * Series([d, c], order).reciprocal()


def transform_hill(op: HillOperator, s) -> HillOperator:
    """Potential of the same operator in the coordinate ``s = s(t)`` (``s(0) = 0``).

    The result has order ``K - 3`` (three derivatives of the inverse change).
    """
    change = _as_change(s)
    if change.s[0] != 0:
        raise ValueError("coordinate change must fix the marked point: s(0) = 0")
    k = min(op.order, change.order)
    t = change.s.truncate(k).reversion()
    dt = t.derivative()
    v = op.u.truncate(k).compose(t).truncate(dt.order) * dt * dt
    out = v.truncate(k - 3) + schwarzian(t) * Fraction(1, 2)
    return HillOperator(out)


def solve_hill(op: HillOperator) -> tuple[Series, Series]:
    """Series solutions of ``psi'' + u psi = 0`` with ``(psi, psi') = (1, 0)`` and ``(0, 1)``.

    From ``(n+2)(n+1) psi_{n+2} = -sum_k u_k psi_{n-k}``; order ``K + 2``.
    """
    u = op.u
    order = u.order + 2
    out = []
    for init in ((1, 0), (0, 1)):
        psi = [Fraction(init[0]), Fraction(init[1])]
        for n in range(order - 1):
            acc = sum((u[k] * psi[n - k] for k in range(min(n, u.order) + 1)), Fraction(0))
            psi.append(-acc / ((n + 2) * (n + 1)))
        out.append(Series(psi, order))
    return out[0], out[1]


def wronskian(a: Series, b: Series) -> Series:
    k = min(a.order, b.order) - 1
    return (a.truncate(k) * b.derivative() - a.derivative() * b.truncate(k)).truncate(k)


def transported_solutions(op: HillOperator, s) -> tuple[Series, Series]:
    """Solutions of ``op`` rewritten as half-densities in the coordinate ``s``.

    ``psi(t(s)) t'(s)^(-1/2)``, with ``t'(0)`` scaled out of the square root
    (a constant factor does not affect the equation).
    """
    change = _as_change(s)
    psi1, psi2 = solve_hill(op)
    k = min(op.order, change.order)
    t = change.s.truncate(k).reversion()
    dt = t.derivative()
    weight = (dt * (1 / dt[0])).sqrt().reciprocal()
    return tuple((p.compose(t).truncate(dt.order) * weight) for p in (psi1, psi2))
