"""Jacobi theta, Weierstrass wp and the Lame-Hermite function on C/<1, tau>.

All functions accept scalars or numpy arrays of complex arguments.

``theta`` is the odd Jacobi theta function

    theta(z) = 2 sum_{n>=0} (-1)^n exp(i pi tau (n+1/2)^2) sin((2n+1) pi z),

with simple zeros exactly on the lattice, ``theta(z+1) = -theta(z)`` and
``theta(z+tau) = -exp(-i pi tau - 2 pi i z) theta(z)``.  The 1-periodic
normalisation ``theta_periodic(z) = exp(i pi z) theta(z)`` satisfies
``theta_periodic(z+tau) = -exp(-2 pi i z) theta_periodic(z)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LatticePoleError",
    "Torus",
    "lame_hermite",
    "reduce_to_cell",
    "theta",
    "theta_periodic",
    "theta_prime",
    "theta_prime0",
    "wp",
    "wp_direct",
    "wp_prime",
    "wp_invariants",
]

_MAX_TERMS = 400


class LatticePoleError(ZeroDivisionError):
    """Argument lies on (or numerically at) a lattice point."""


@dataclass(frozen=True)
class Torus:
    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if tau.imag <= 0:
            raise ValueError("tau must have positive imaginary part")
        object.__setattr__(self, "tau", tau)

    @property
    def q(self) -> complex:
        """``exp(2 pi i tau)``."""
        return cmath.exp(2j * cmath.pi * self.tau)

    @property
    def scale(self) -> float:
        """Shortest lattice vector length among 1, tau, tau +- 1."""
        return min(1.0, abs(self.tau), abs(self.tau - 1), abs(self.tau + 1))


def reduce_to_cell(z, torus: Torus):
    """Translate ``z`` by lattice vectors into the cell centred at 0."""
    z = np.asarray(z, dtype=complex)
    m = np.round(z.imag / torus.tau.imag)
    z = z - m * torus.tau
    n = np.round(z.real)
    return z - n


def _series(z, torus: Torus, tol: float, derivative: bool):
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for n in range(_MAX_TERMS):
        k = 2 * n + 1
        weight = (-1) ** n * cmath.exp(1j * cmath.pi * torus.tau * (n + 0.5) ** 2)
        if derivative:
            term = 2 * weight * k * np.pi * np.cos(k * np.pi * z)
        else:
            term = 2 * weight * np.sin(k * np.pi * z)
        acc = acc + term
        if n and np.all(np.abs(term) <= tol * np.abs(acc)):
            break
        # all remaining terms are below the floating-point floor
        if n and abs(weight) * np.max(np.exp(k * np.pi * np.abs(z.imag))) * k < 1e-300:
            break
    return acc


def theta(z, torus: Torus, tol: float = 1e-16):
    """Odd Jacobi theta function (q-series truncated at relative ``tol``)."""
    out = _series(z, torus, tol, derivative=False)
    return out if out.ndim else complex(out)


def theta_prime(z, torus: Torus, tol: float = 1e-16):
    out = _series(z, torus, tol, derivative=True)
    return out if out.ndim else complex(out)


def theta_prime0(torus: Torus, tol: float = 1e-16) -> complex:
    return complex(_series(0.0, torus, tol, derivative=True))


def theta_periodic(z, torus: Torus, tol: float = 1e-16):
    """1-periodic normalisation ``exp(i pi z) theta(z)``."""
    return np.exp(1j * np.pi * np.asarray(z, dtype=complex)) * theta(z, torus, tol)


def _csc2(u):
    s = np.sin(u)
    return 1.0 / (s * s)


def _check_pole(z, torus: Torus):
    r = reduce_to_cell(z, torus)
    if np.any(np.abs(r) < 1e-12):
        raise LatticePoleError("argument lies on the period lattice")


def wp(z, torus: Torus, tol: float = 1e-15):
    """Weierstrass wp by the lattice sum, one row of periods at a time.

    The row ``{n + m tau : n in Z}`` is summed in closed form,
    ``sum_n 1/(z - n - m tau)^2 = pi^2 csc^2(pi (z - m tau))``, and rows are
    added symmetrically in ``m`` until the increment drops below ``tol``.
    """
    z = np.asarray(z, dtype=complex)
    _check_pole(z, torus)
    z = reduce_to_cell(z, torus)
    pi2 = np.pi**2
    total = pi2 * _csc2(np.pi * z) - pi2 / 3
    for m in range(1, _MAX_TERMS):
        w = m * torus.tau
        inc = pi2 * (_csc2(np.pi * (z - w)) + _csc2(np.pi * (z + w)) - 2 * _csc2(np.pi * w))
        total = total + inc
        if np.all(np.abs(inc) <= tol * np.maximum(np.abs(total), 1.0)):
            break
    return total if total.ndim else complex(total)


def wp_prime(z, torus: Torus, tol: float = 1e-15):
    """Derivative of wp, from the same row-summed lattice sum."""
    z = np.asarray(z, dtype=complex)
    _check_pole(z, torus)
    z = reduce_to_cell(z, torus)

    def row(u):
        # d/dz pi^2 csc^2(pi u) = -2 pi^3 csc^2(pi u) cot(pi u)
        return -2 * np.pi**3 * _csc2(np.pi * u) * np.cos(np.pi * u) / np.sin(np.pi * u)

    total = row(z)
    for m in range(1, _MAX_TERMS):
        w = m * torus.tau
        inc = row(z - w) + row(z + w)
        total = total + inc
        if np.all(np.abs(inc) <= tol * np.maximum(np.abs(total), 1.0)):
            break
    return total if total.ndim else complex(total)


def wp_direct(z: complex, torus: Torus, size: int) -> complex:
    """Brute-force symmetric lattice sum over ``|m|, |n| <= size`` (slowly convergent)."""
    z = complex(z)
    m, n = np.meshgrid(np.arange(-size, size + 1), np.arange(-size, size + 1))
    w = (n + m * torus.tau).ravel()
    w = w[w != 0]
    return complex(1 / z**2 + np.sum(1 / (z - w) ** 2 - 1 / w**2))


def wp_invariants(torus: Torus, radius: float | None = None, samples: int = 64) -> tuple[complex, complex]:
    """``(g2, g3)`` read off the Laurent expansion ``wp = 1/z^2 + g2 z^2/20 + g3 z^4/28 + ...``."""
    r = radius or 0.25 * torus.scale
    ang = 2 * np.pi * np.arange(samples) / samples
    zs = r * np.exp(1j * ang)
    f = wp(zs, torus) - 1 / zs**2
    c2 = np.mean(f * zs**-2)
    c4 = np.mean(f * zs**-4)
    return complex(20 * c2), complex(28 * c4)


def lame_hermite(z, a, torus: Torus, tol: float = 1e-16):
    """``H(z, a) = exp(a theta'/theta(z)) theta(z - a) / theta(z)``."""
    _check_pole(z, torus)
    th = theta(z, torus, tol)
    val = np.exp(a * theta_prime(z, torus, tol) / th) * theta(np.asarray(z) - a, torus, tol) / th
    return val if np.ndim(val) else complex(val)
