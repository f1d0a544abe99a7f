"""Weyl algebra in ``x_1..x_N`` with coefficients in a rational function field.

Elements are kept in normal order (all ``x`` to the left of all ``d``);
products are re-normal-ordered with ``[d_i, x_j] = delta_ij``.
Coefficients are RatFuncs in parameters that commute with everything.
"""

from __future__ import annotations

from collections import defaultdict
from math import comb, perm
from typing import Mapping

from .poly import Poly, RatFunc, ratfunc_sum

__all__ = ["WeylElement"]

Key = tuple  # (x exponents, d exponents), each a tuple of length N


class WeylElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Key, object] | None = None):
        self.n = n
        clean: dict[Key, RatFunc] = {}
        for (xs, ds), c in (terms or {}).items():
            if len(xs) != n or len(ds) != n:
                raise ValueError("exponent tuples must have length n")
            c = RatFunc.coerce(c)
            if not c.is_zero():
                clean[(tuple(xs), tuple(ds))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "WeylElement":
        w = cls.__new__(cls)
        w.n = n
        w.terms = terms
        return w

    @classmethod
    def scalar(cls, n: int, c) -> "WeylElement":
        zero = (0,) * n
        return cls(n, {(zero, zero): c})

    @classmethod
    def x(cls, n: int, i: int) -> "WeylElement":
        """The coordinate ``x_i`` (0-based index)."""
        e = [0] * n
        e[i] = 1
        return cls(n, {(tuple(e), (0,) * n): 1})

    @classmethod
    def d(cls, n: int, i: int) -> "WeylElement":
        """The derivation ``d/dx_i`` (0-based index)."""
        e = [0] * n
        e[i] = 1
        return cls(n, {((0,) * n, tuple(e)): 1})

    def _coerce(self, other) -> "WeylElement":
        if isinstance(other, WeylElement):
            if other.n != self.n:
                raise ValueError("Weyl elements in different numbers of variables")
            return other
        return WeylElement.scalar(self.n, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = self._coerce(other)
        buckets = defaultdict(list)
        for k, c in self.terms.items():
            buckets[k].append(c)
        for k, c in other.terms.items():
            buckets[k].append(c)
        return self._from_buckets(buckets)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def _from_buckets(self, buckets) -> "WeylElement":
        out = {}
        for k, cs in buckets.items():
            c = cs[0] if len(cs) == 1 else ratfunc_sum(cs)
            if not c.is_zero():
                out[k] = c
        return WeylElement._raw(self.n, out)

    def __mul__(self, other):
        if not isinstance(other, WeylElement):
            c = RatFunc.coerce(other)
            if c.is_zero():
                return WeylElement._raw(self.n, {})
            return WeylElement._raw(self.n, {k: v * c for k, v in self.terms.items()})
        other = self._coerce(other)
        buckets = defaultdict(list)
        for (xa, da), ca in self.terms.items():
            for (xb, db), cb in other.terms.items():
                c = ca * cb
                for (xs, ds), mult in _reorder(xa, da, xb, db):
                    buckets[(xs, ds)].append(c * mult if mult != 1 else c)
        return self._from_buckets(buckets)

    def __rmul__(self, other):
        c = RatFunc.coerce(other)
        return WeylElement._raw(self.n, {k: c * v for k, v in self.terms.items()}) if not c.is_zero() else WeylElement._raw(self.n, {})

    def __truediv__(self, other):
        return self * RatFunc.coerce(other).inverse()

    def __pow__(self, k: int):
        result = WeylElement.scalar(self.n, 1)
        for _ in range(k):
            result = result * self
        return result

    def commutator(self, other: "WeylElement") -> "WeylElement":
        return self * other - other * self

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def apply(self, f: Poly, names: list[str]) -> RatFunc:
        """Act on a polynomial in the variables ``names`` (one per x_i)."""
        if len(names) != self.n:
            raise ValueError("need one variable name per coordinate")
        total = []
        for (xs, ds), c in self.terms.items():
            g = f
            for i, k in enumerate(ds):
                for _ in range(k):
                    g = g.diff(names[i])
            mono = Poly.const(1)
            for i, k in enumerate(xs):
                if k:
                    mono = mono * Poly.var(names[i]) ** k
            total.append(c * RatFunc(g * mono))
        return ratfunc_sum(total)

    def __repr__(self):
        if not self.terms:
            return "WeylElement(0)"
        parts = []
        for (xs, ds), c in sorted(self.terms.items()):
            mono = "".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(xs) if e)
            mono += "".join(f"d{i + 1}^{e}" if e > 1 else f"d{i + 1}" for i, e in enumerate(ds) if e)
            parts.append(f"({c}){mono}")
        return "WeylElement(" + " + ".join(parts) + ")"


def _reorder(xa, da, xb, db):
    """Normal-order ``x^xa d^da x^xb d^db``; yields ((xs, ds), integer multiplicity)."""
    per_var = []
    for a, b in zip(da, xb):
        if a == 0 or b == 0:
            per_var.append([(0, 1)])
        else:
            # d^a x^b = sum_k C(a,k) b!/(b-k)! x^(b-k) d^(a-k)
            per_var.append([(k, comb(a, k) * perm(b, k)) for k in range(min(a, b) + 1)])
    results = [((), (), 1)]
    for i, options in enumerate(per_var):
        nxt = []
        for xs, ds, m in results:
            for k, mult in options:
                nxt.append((xs + (xa[i] + xb[i] - k,), ds + (da[i] + db[i] - k,), m * mult))
        results = nxt
    return [((xs, ds), m) for xs, ds, m in results]
