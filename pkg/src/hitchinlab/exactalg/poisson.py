"""Canonical Poisson brackets and reduction modulo p-linear ideals."""

from __future__ import annotations

from typing import Iterable, Sequence

from .poly import Poly, RatFunc, ratfunc_sum, var_index, var_name

__all__ = ["poisson_bracket", "reduce_mod_ideal", "substitute", "UnsupportedIdeal"]


class UnsupportedIdeal(ValueError):
    """Raised for generators that are not linear in the momentum variables."""


def _check_declared(f, allowed: set[str], label: str) -> None:
    extra = f.variables() - allowed
    if extra:
        raise ValueError(f"{label} uses undeclared variables: {sorted(extra)}")


def poisson_bracket(f, g, pairs: Sequence[tuple[str, str]], params: Iterable[str] = ()):
    """Canonical bracket with the convention ``{p_i, y_i} = +1``.

    ``pairs`` lists ``(position, momentum)`` variable names.  Any other
    variable appearing in ``f`` or ``g`` must be listed in ``params``
    (treated as a constant).  Returns a Poly when both inputs are
    polynomials, otherwise a reduced RatFunc.
    """
    positions = [q for q, _ in pairs]
    momenta = [p for _, p in pairs]
    names = positions + momenta
    if len(set(names)) != len(names):
        raise ValueError("canonical pairs must use distinct variables")
    allowed = set(names) | set(params)
    _check_declared(f, allowed, "first argument")
    _check_declared(g, allowed, "second argument")

    if isinstance(f, Poly) and isinstance(g, Poly):
        total = Poly.const(0)
        for q, p in pairs:
            total = total + f.diff(p) * g.diff(q) - f.diff(q) * g.diff(p)
        return total
    f = RatFunc.coerce(f)
    g = RatFunc.coerce(g)
    return ratfunc_sum(
        term
        for q, p in pairs
        for term in (f.diff(p) * g.diff(q), -(f.diff(q) * g.diff(p)))
    )


def substitute(f, values: dict[str, RatFunc]) -> RatFunc:
    """Substitute rational functions for some variables of ``f``.

    All substituted values are put over one common denominator so that
    the result needs a single gcd reduction.
    """
    f = RatFunc.coerce(f)
    if not values:
        return f
    vals = {var_index(k): RatFunc.coerce(v) for k, v in values.items()}
    common = Poly.const(1)
    seen: set[Poly] = set()
    for v in vals.values():
        if not v.den.is_constant() and v.den not in seen:
            seen.add(v.den)
            common = common * v.den
    # numerators of each value over the common denominator
    lifted = {}
    for k, v in vals.items():
        scale = RatFunc(common) / v.den
        lifted[k] = v.num * scale.as_poly()

    def lift(p: Poly) -> tuple[Poly, int]:
        top = max((sum(e for v, e in m if v in vals) for m, _ in p.items()), default=0)
        out = Poly.const(0)
        powers: dict[tuple[int, int], Poly] = {}
        for m, c in p.items():
            term = Poly.const(c)
            rest = []
            deg = 0
            for v, e in m:
                if v in vals:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = lifted[v] ** e
                    term = term * powers[key]
                    deg += e
                else:
                    rest.append((v, e))
            if rest:
                term = term * Poly({tuple(rest): 1})
            if top > deg:
                term = term * common ** (top - deg)
            out = out + term
        return out, top

    num, dn = lift(f.num)
    den, dd = lift(f.den)
    # f = (num / common^dn) / (den / common^dd)
    if dn >= dd:
        return RatFunc(num, den * common ** (dn - dd))
    return RatFunc(num * common ** (dd - dn), den)


def reduce_mod_ideal(f, gens: Sequence, momenta: Sequence[str]) -> RatFunc:
    """Normal form of ``f`` modulo generators that are affine-linear in ``momenta``.

    Elimination runs over the field of rational functions in every other
    variable (i.e. for generic positions), pivoting on the last momentum
    first.  The result is zero exactly when ``f`` lies in the ideal over
    that field.
    """
    momenta = list(momenta)
    mset = set(momenta)
    rows: list[dict[str, RatFunc]] = []
    for g in gens:
        g = RatFunc.coerce(g)
        if not g.is_polynomial():
            raise UnsupportedIdeal("generators must be polynomials")
        g = g.as_poly()
        row: dict[str, RatFunc] = {}
        for p in momenta:
            if g.degree(p) > 1:
                raise UnsupportedIdeal(f"generator is not linear in {p}: {g}")
        for m, c in g.items():
            moms = [(v, e) for v, e in m if var_name(v) in mset]
            if len(moms) > 1:
                raise UnsupportedIdeal(f"generator has a product of momenta: {g}")
            key = var_name(moms[0][0]) if moms else ""
            rest = tuple((v, e) for v, e in m if var_name(v) not in mset)
            row[key] = row.get(key, RatFunc(0)) + RatFunc(Poly({rest: c}))
        rows.append({k: v for k, v in row.items() if not v.is_zero()})

    # Gauss-Jordan elimination; the constant column is keyed by "".
    pivots: list[tuple[str, dict[str, RatFunc]]] = []
    for p in reversed(momenta):
        idx = next((i for i, r in enumerate(rows) if p in r), None)
        if idx is None:
            continue
        row = rows.pop(idx)
        lead = row[p]
        row = {k: v / lead for k, v in row.items()}
        rows = [_eliminate(r, row, p) for r in rows]
        pivots = [(q, _eliminate(r, row, p)) for q, r in pivots]
        pivots.append((p, row))
    for r in rows:
        if r.get("") is not None and not r[""].is_zero() and len(r) == 1:
            # inconsistent constraints: the ideal is the unit ideal
            return RatFunc(0)

    solution = {}
    for p, row in pivots:
        # p + sum_k row[k] * k + row[""] = 0
        expr = [-row.get("", RatFunc(0))]
        expr += [-(v * RatFunc(Poly.var(k))) for k, v in row.items() if k not in ("", p)]
        solution[p] = ratfunc_sum(expr)
    return substitute(f, solution)


def _eliminate(r: dict[str, RatFunc], pivot_row: dict[str, RatFunc], p: str) -> dict[str, RatFunc]:
    factor = r.get(p)
    if factor is None:
        return r
    out = dict(r)
    for k, v in pivot_row.items():
        out[k] = out.get(k, RatFunc(0)) - factor * v
    return {k: v for k, v in out.items() if not v.is_zero()}
