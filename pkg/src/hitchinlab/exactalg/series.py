"""Truncated power series in one variable with exact coefficients.

A ``Series`` of order ``K`` stores ``c_0 .. c_K``; every coefficient up to
``t^K`` is exact and nothing beyond is known.  Binary operations keep the
smaller order, and differentiation lowers the order by one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .poly import as_fraction

__all__ = ["Series", "DEFAULT_ORDER", "series_compose"]

DEFAULT_ORDER = 16


class Series:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [as_fraction(c) for c in coeffs]
        if order is None:
            order = max(len(cs) - 1, DEFAULT_ORDER)
        if order < 0:
            raise ValueError("series order must be non-negative")
        cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> "Series":
        return cls([c], order)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "Series":
        """The coordinate ``t`` itself."""
        return cls([0, 1], order)

    @classmethod
    def geometric(cls, ratio=1, order: int = DEFAULT_ORDER) -> "Series":
        """``1/(1 - ratio*t)``."""
        r = as_fraction(ratio)
        return cls([r**k for k in range(order + 1)], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ValueError(f"cannot raise the order of a series ({self.order} -> {order})")
        return Series(self.coeffs[: order + 1], order)

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        k = min(self.order, other.order)
        return Series([a + b for a, b in zip(self.coeffs[: k + 1], other.coeffs)], k)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = as_fraction(other)
            return Series([c * a for a in self.coeffs], self.order)
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (k + 1)
        for i in range(k + 1):
            ai = a[i]
            if ai:
                for j in range(k + 1 - i):
                    out[i + j] += ai * b[j]
        return Series(out, k)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Series.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> "Series":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        k = self.order
        out = [Fraction(0)] * (k + 1)
        out[0] = 1 / c0
        for n in range(1, k + 1):
            s = sum((self.coeffs[j] * out[n - j] for j in range(1, n + 1)), Fraction(0))
            out[n] = -s / c0
        return Series(out, k)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.reciprocal()
        c = as_fraction(other)
        return self * (1 / c)

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def agrees_with(self, other: "Series", order: int | None = None) -> bool:
        """Coefficient agreement through ``order`` (default: the common order)."""
        k = min(self.order, other.order) if order is None else order
        return self.coeffs[: k + 1] == other.coeffs[: k + 1]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def derivative(self) -> "Series":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 series")
        return Series([k * c for k, c in enumerate(self.coeffs) if k], self.order - 1)

    def integral(self, constant=0) -> "Series":
        cs = [as_fraction(constant)] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        return Series(cs, self.order + 1)

    def compose(self, inner: "Series") -> "Series":
        """``self(inner(t))``; the inner series must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("composition needs an inner series with zero constant term")
        k = min(self.order, inner.order)
        inner = inner.truncate(k)
        result = Series.constant(self.coeffs[k], k)
        for c in reversed(self.coeffs[:k]):
            result = result * inner + c
        return result

    def reversion(self) -> "Series":
        """Compositional inverse: ``r`` with ``self(r(t)) = t``."""
        if self.coeffs[0] != 0:
            raise ValueError("reversion needs zero constant term")
        if self.order < 1 or self.coeffs[1] == 0:
            raise ZeroDivisionError("reversion needs a nonzero linear coefficient")
        k = self.order
        a1 = self.coeffs[1]
        r = Series([0, 1 / a1], k)
        # Newton-free fixed point: fix one coefficient per pass
        for n in range(2, k + 1):
            err = self.compose(r).coeffs[n]
            cs = list(r.coeffs)
            cs[n] -= err / a1
            r = Series(cs, k)
        return r

    def sqrt(self) -> "Series":
        """Square root of a series with constant term 1."""
        if self.coeffs[0] != 1:
            raise ValueError("sqrt implemented for series with constant term 1")
        k = self.order
        out = [Fraction(0)] * (k + 1)
        out[0] = Fraction(1)
        for n in range(1, k + 1):
            s = sum((out[j] * out[n - j] for j in range(1, n)), Fraction(0))
            out[n] = (self.coeffs[n] - s) / 2
        return Series(out, k)

    def evaluate(self, t):
        total = 0
        for c in reversed(self.coeffs):
            total = total * t + c
        return total

    def __repr__(self):
        return f"Series({[str(c) for c in self.coeffs]}, order={self.order})"


def series_compose(outer: Series, inner: Series) -> Series:
    return outer.compose(inner)
