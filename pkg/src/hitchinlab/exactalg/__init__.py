"""Exact algebra kernel: rationals, polynomials, rational functions,
Poisson brackets, the Weyl algebra and truncated power series."""

from .poisson import UnsupportedIdeal, poisson_bracket, reduce_mod_ideal, substitute
from .poly import Poly, RatFunc, as_fraction, poly_sum, ratfunc_sum, var, variables
from .series import DEFAULT_ORDER, Series, series_compose
from .weyl import WeylElement

__all__ = [
    "DEFAULT_ORDER",
    "Poly",
    "RatFunc",
    "Series",
    "UnsupportedIdeal",
    "WeylElement",
    "as_fraction",
    "poisson_bracket",
    "poly_sum",
    "ratfunc_sum",
    "reduce_mod_ideal",
    "series_compose",
    "substitute",
    "var",
    "variables",
]
