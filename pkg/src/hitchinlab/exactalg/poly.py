"""Sparse multivariate polynomials and rational functions over Q.

Variables live in one process-wide registry, so any two values can be
combined without declaring a common ring first.  Monomials are stored
sparsely as sorted ``(variable_index, exponent)`` tuples and terms are
ordered graded-lexicographically with respect to registration order.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "Poly",
    "RatFunc",
    "as_fraction",
    "poly_sum",
    "ratfunc_sum",
    "var",
    "variables",
    "var_index",
    "var_name",
]

Monomial = tuple  # tuple[tuple[int, int], ...]
Number = Union[int, Fraction]

_ONE: Monomial = ()

_lock = threading.Lock()
_names: list[str] = []
_index: dict[str, int] = {}


def var_index(name: str) -> int:
    """Return the registry index of ``name``, registering it if new."""
    idx = _index.get(name)
    if idx is not None:
        return idx
    with _lock:
        idx = _index.get(name)
        if idx is None:
            idx = len(_names)
            _names.append(name)
            _index[name] = idx
    return idx


def var_name(idx: int) -> str:
    return _names[idx]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected: the exact layer never guesses a rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial, width: int) -> tuple:
    dense = [0] * width
    for v, e in m:
        dense[v] = e
    return (_mono_degree(m), tuple(dense))


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = as_fraction(c)
                if c:
                    clean[m] = c
        self._terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = as_fraction(c)
        return cls._raw({_ONE: c} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._raw({((var_index(name), 1),): Fraction(1)})

    @classmethod
    def coerce(cls, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return cls.const(other)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(_ONE, Fraction(0))

    def variables(self) -> set[str]:
        return {_names[v] for m in self._terms for v, _ in m}

    def _var_indices(self) -> set[int]:
        return {v for m in self._terms for v, _ in m}

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(_mono_degree(m) for m in self._terms)

    def degree(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        idx = var_index(name)
        return max((e for m in self._terms for v, e in m if v == idx), default=0)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in decreasing graded-lex order."""
        width = len(_names)
        return sorted(self._terms.items(), key=lambda mc: _grlex_key(mc[0], width), reverse=True)

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self.sorted_terms()[0][1]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        other = Poly.coerce(other)
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if not isinstance(other, Poly):
            c = as_fraction(other)
            if not c:
                return Poly._raw({})
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Poly, RatFunc)):
            return RatFunc(self) / other
        c = as_fraction(other)
        if not c:
            raise ZeroDivisionError("polynomial divided by zero")
        return self * (1 / c)

    def __rtruediv__(self, other):
        return RatFunc(Poly.coerce(other)) / RatFunc(self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return other == self
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- calculus and substitution ---------------------------------------
    def diff(self, name: str) -> "Poly":
        idx = var_index(name)
        out = {}
        for m, c in self._terms.items():
            for k, (v, e) in enumerate(m):
                if v == idx:
                    nm = m[:k] + ((v, e - 1),) + m[k + 1:] if e > 1 else m[:k] + m[k + 1:]
                    out[nm] = c * e
                    break
        return Poly._raw(out)

    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Substitute exact numbers or polynomials for variables."""
        repl = {var_index(k): Poly.coerce(v) for k, v in values.items()}
        result = Poly._raw({})
        for m, c in self._terms.items():
            term = Poly._raw({_ONE: c})
            rest = []
            for v, e in m:
                if v in repl:
                    term = term * repl[v] ** e
                else:
                    rest.append((v, e))
            if rest:
                term = term * Poly._raw({tuple(rest): Fraction(1)})
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at numbers (exact or floating); all variables needed."""
        total = 0
        lookup = {var_index(k): v for k, v in values.items()}
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                try:
                    t = t * lookup[v] ** e
                except KeyError:
                    raise KeyError(f"no value for variable {_names[v]!r}") from None
            total = total + t
        return total

    def coefficients_in(self, name: str) -> list["Poly"]:
        """Coefficient list ``[c0, c1, ...]`` viewing self as univariate in ``name``."""
        idx = var_index(name)
        buckets: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = 0
            rest = []
            for v, ee in m:
                if v == idx:
                    e = ee
                else:
                    rest.append((v, ee))
            buckets.setdefault(e, {})[tuple(rest)] = c
        if not buckets:
            return []
        return [Poly._raw(buckets.get(k, {})) for k in range(max(buckets) + 1)]

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(_names[v] if e == 1 else f"{_names[v]}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def var(name: str) -> Poly:
    return Poly.var(name)


def variables(*names: str) -> tuple[Poly, ...]:
    """``y1, y2 = variables("y1", "y2")``; a single comma/space separated string also works."""
    if len(names) == 1:
        names = tuple(names[0].replace(",", " ").split())
    return tuple(Poly.var(n) for n in names)


# -- gcd via sympy's sparse polynomial rings ------------------------------

@lru_cache(maxsize=256)
def _ring(indices: tuple[int, ...]):
    from sympy.polys.domains import QQ
    from sympy.polys.orderings import grlex
    from sympy.polys.rings import ring

    gens = [f"v{i}" for i in indices]
    return ring(gens, QQ, grlex)[0]


def _to_ring(p: Poly, R, position: dict[int, int]):
    from sympy.polys.domains import QQ

    width = len(position)
    d = {}
    for m, c in p.items():
        dense = [0] * width
        for v, e in m:
            dense[position[v]] = e
        d[tuple(dense)] = QQ(c.numerator, c.denominator)
    return R.from_dict(d)


def _from_ring(el, indices: tuple[int, ...]) -> Poly:
    out = {}
    for exps, c in el.items():
        m = tuple((indices[k], e) for k, e in enumerate(exps) if e)
        out[m] = Fraction(int(c.numerator), int(c.denominator))
    return Poly._raw(out)


def _cancel(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    indices = tuple(sorted(num._var_indices() | den._var_indices()))
    R = _ring(indices)
    position = {v: k for k, v in enumerate(indices)}
    _, a, b = _to_ring(num, R, position).cofactors(_to_ring(den, R, position))
    return _from_ring(a, indices), _from_ring(b, indices)


class RatFunc:
    """Reduced quotient of two polynomials with a monic (grlex) denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, _reduced: bool = False):
        num = Poly.coerce(num)
        den = Poly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.const(1)
            elif not den.is_constant() and num._var_indices() & den._var_indices():
                num, den = _cancel(num, den)
        if not _reduced or den.is_constant():
            lc = den.leading_coefficient()
            if lc != 1:
                num = num * (1 / lc)
                den = den * (1 / lc)
        self.num: Poly = num
        self.den: Poly = den

    @classmethod
    def coerce(cls, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return cls(other, Poly.const(1), _reduced=True)
        return cls(Poly.const(other), Poly.const(1), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def variables(self) -> set[str]:
        return self.num.variables() | self.den.variables()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("rational function has a non-constant denominator")
        return self.num * (1 / self.den.constant_value())

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            if self.den.is_constant():
                return RatFunc(self.num + other.num, self.den, _reduced=True)
            return RatFunc(self.num + other.num, self.den)
        if self.den.is_constant() and other.den.is_constant():
            return RatFunc(
                self.num * other.den.constant_value() + other.num * self.den.constant_value(),
                self.den * other.den.constant_value(),
            )
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            c = as_fraction(other)
            return RatFunc(self.num * c, self.den, _reduced=True) if c else RatFunc(0)
        other = RatFunc.coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(0)
        if self.den.is_constant() and other.den.is_constant():
            return RatFunc(self.num * other.num, self.den * other.den, _reduced=True)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(self.den, self.num, _reduced=self.num.is_constant() and self.den.is_constant())

    def __truediv__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            c = as_fraction(other)
            if not c:
                raise ZeroDivisionError("rational function divided by zero")
            return RatFunc(self.num * (1 / c), self.den, _reduced=True)
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def diff(self, name: str) -> "RatFunc":
        if self.den.is_constant():
            return RatFunc(self.num.diff(name), self.den, _reduced=True)
        return RatFunc(self.num.diff(name) * self.den - self.num * self.den.diff(name), self.den * self.den)

    def subs(self, values: Mapping[str, object]) -> "RatFunc":
        return RatFunc(self.num.subs(values)) / RatFunc(self.den.subs(values))

    def evaluate(self, values: Mapping[str, object]):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"


def poly_sum(items: Iterable) -> Poly:
    total = Poly.const(0)
    for it in items:
        total = total + it
    return total


def ratfunc_sum(items: Iterable) -> RatFunc:
    """Sum many rational functions with a single final gcd reduction.

    Numerators over identical denominators are added first, so long sums
    of terms sharing a few denominators stay cheap.
    """
    groups: dict[Poly, Poly] = {}
    for it in items:
        it = RatFunc.coerce(it)
        if it.is_zero():
            continue
        groups[it.den] = groups.get(it.den, Poly.const(0)) + it.num
    groups = {d: n for d, n in groups.items() if not n.is_zero()}
    if not groups:
        return RatFunc(0)
    if len(groups) == 1:
        (d, n), = groups.items()
        return RatFunc(n, d)
    dens = list(groups)
    common = Poly.const(1)
    for d in dens:
        common = common * d
    total = Poly.const(0)
    for i, d in enumerate(dens):
        cofactor = Poly.const(1)
        for j, e in enumerate(dens):
            if j != i:
                cofactor = cofactor * e
        total = total + groups[d] * cofactor
    return RatFunc(total, common)
