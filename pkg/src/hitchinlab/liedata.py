"""Degrees of basic invariant polynomials and dimension counts for GL_n, SL_n, PGL_n."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["FAMILIES", "GroupData", "bun_dim", "degrees", "group_data"]

FAMILIES = ("GL", "SL", "PGL")


def _family(name: str) -> str:
    fam = name.upper()
    if fam not in FAMILIES:
        raise ValueError(f"unsupported group family {name!r}; expected one of {', '.join(FAMILIES)}")
    return fam


def degrees(family: str, n: int) -> list[int]:
    fam = _family(family)
    if n < 1:
        raise ValueError("need n >= 1")
    return list(range(1 if fam == "GL" else 2, n + 1))


@dataclass(frozen=True)
class GroupData:
    family: str
    n: int
    degrees: tuple
    dim: int
    center_dim: int


def group_data(family: str, n: int) -> GroupData:
    fam = _family(family)
    degs = tuple(degrees(fam, n))
    dim = n * n if fam == "GL" else n * n - 1
    # GL_n has a one-dimensional centre; those of SL_n and PGL_n are finite
    center = 1 if fam == "GL" else 0
    return GroupData(fam, n, degs, dim, center)


def bun_dim(dim_g: int, dim_z: int, g: int) -> int:
    """Dimension of the moduli of stable G-bundles on a genus-``g`` curve."""
    if g < 2:
        raise ValueError("need genus g >= 2")
    return (g - 1) * dim_g + dim_z
