from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hitchinlab.exactalg import Poly, RatFunc, WeylElement
from hitchinlab.gaudin import (
    GaudinFamily,
    casimir_action,
    commutativity_check,
    diagonal_action,
    gaudin_operators,
    gaudin_weyl,
    sl2_irrep,
    spectrum,
    weyl_sl2,
)


def _eye(n):
    out = np.empty((n, n), dtype=object)
    out[...] = Fraction(0)
    for k in range(n):
        out[k, k] = Fraction(1)
    return out


def _equal(a, b):
    return all(x == y for x, y in zip(a.flat, b.flat)) and a.shape == b.shape


def _charpoly(m):
    return sympy.Matrix(m.tolist()).charpoly(sympy.Symbol("x")).as_expr()


# -- irreps and the Casimir tensor --------------------------------------------------------

def test_trivial_irrep():
    r = sl2_irrep(1)
    assert r.E[0, 0] == r.F[0, 0] == r.H[0, 0] == 0


def test_defining_irrep():
    r = sl2_irrep(2)
    assert r.E.tolist() == [[0, 1], [0, 0]]
    assert r.H.tolist() == [[1, 0], [0, -1]]


@pytest.mark.parametrize("d", range(1, 7))
def test_irrep_relations_and_casimir(d):
    r = sl2_irrep(d)
    assert r.relations_hold()
    # C acts by lambda(lambda + 2)/2 with lambda = d - 1
    assert _equal(r.casimir(), _eye(d) * Fraction((d - 1) * (d + 1), 2))


def test_irrep_rejects_bad_dimension():
    for d in (0, -1, 2.5):
        with pytest.raises(ValueError):
            sl2_irrep(d)


def test_three_dimensional_casimir_is_four():
    assert _equal(sl2_irrep(3).casimir(), _eye(3) * 4)


def test_omega_spectrum_on_two_qubits():
    x = sympy.Symbol("x")
    poly = _charpoly(casimir_action((2, 2), 1, 2))
    assert sympy.expand(poly - (x - sympy.Rational(1, 2)) ** 3 * (x + sympy.Rational(3, 2))) == 0


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_trivial_factor_kills_omega(d):
    assert all(v == 0 for v in casimir_action((1, d), 1, 2).flat)


def test_omega_index_errors():
    with pytest.raises(ValueError):
        casimir_action((2, 2), 1, 1)
    with pytest.raises(ValueError):
        casimir_action((2, 2), 1, 3)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 4), (2, 2, 2)])
def test_omega_is_invariant(dims):
    om = casimir_action(dims, 1, 2)
    for x in diagonal_action(dims).values():
        assert all(v == 0 for v in (om.dot(x) - x.dot(om)).flat)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3), (1, 4)])
def test_coproduct_of_casimir(dims):
    diag = diagonal_action(dims)
    e, f, h = diag["e"], diag["f"], diag["h"]
    total = e.dot(f) + f.dot(e) + h.dot(h) * Fraction(1, 2)
    a, b = sl2_irrep(dims[0]), sl2_irrep(dims[1])
    split = np.kron(a.casimir(), _eye(dims[1])) + np.kron(_eye(dims[0]), b.casimir())
    assert _equal(total, split + casimir_action(dims, 1, 2) * 2)


# -- Gaudin matrices ---------------------------------------------------------------------

def test_two_site_family():
    fam = gaudin_operators((2, 2), (0, 1))
    om = casimir_action((2, 2), 1, 2)
    assert _equal(fam.operators[0], -om)
    assert _equal(fam.operators[1], om)


def test_all_trivial_sites_give_zero():
    fam = gaudin_operators((1, 1, 1), (0, 1, 2))
    assert all(v == 0 for g in fam.operators for v in g.flat)


def test_family_validation():
    with pytest.raises(ValueError):
        gaudin_operators((2, 2), (0, 0))
    with pytest.raises(ValueError):
        gaudin_operators((2, 2), (0, 1, 2))
    with pytest.raises(ValueError):
        gaudin_operators((2,), (0,))


@pytest.mark.parametrize(
    "dims, points",
    [
        ((2, 2), (0, 1)),
        ((2, 2, 2), (0, 1, Fraction(5, 2))),
        ((2, 2, 3), (0, 1, 3)),
        ((2, 3, 2), (Fraction(-1, 3), 2, 7)),
    ],
)
def test_family_commutes(dims, points):
    report = commutativity_check(gaudin_operators(dims, points))
    assert report["pass"]
    assert report["diagonal_sl2"]
    assert len(report["pairs"]) == len(dims) * (len(dims) - 1) // 2


def test_wrong_denominator_is_detected():
    dims, points = (2, 2, 3), (0, 1, 3)
    fam = gaudin_operators(dims, points)
    ops = list(fam.operators)
    # replace 1/(t_1 - t_3) by 1/(t_1 - t_3 + 1) in G_1
    ops[0] = ops[0] + casimir_action(dims, 1, 3) * (Fraction(1, -2) - Fraction(1, -3))
    report = commutativity_check(GaudinFamily(dims, fam.points, ops))
    assert not report["pass"]
    assert any(p["nonzero_entries"] > 0 for p in report["pairs"])


@given(st.integers(-5, 5).filter(bool), st.integers(1, 4))
@settings(max_examples=10, deadline=None)
def test_scaling_does_not_affect_commutation(num, den):
    fam = gaudin_operators((2, 2, 2), (0, 1, 4), scale=Fraction(num, den))
    assert commutativity_check(fam)["pass"]
    base = gaudin_operators((2, 2, 2), (0, 1, 4))
    assert _equal(fam.operators[1], base.operators[1] * Fraction(num, den))


def test_spectrum_blocks():
    out = spectrum(gaudin_operators((2, 2, 2), (0, 1, 3)))
    blocks = {b["weight"]: b for b in out["blocks"]}
    # (C^2)^{x3} = V_3 + 2 V_1
    assert blocks[3]["multiplicity"] == 1
    assert blocks[1]["multiplicity"] == 2
    assert all(len(p) == 3 for p in blocks[1]["charpolys"])


def test_spectrum_recovers_full_charpoly():
    fam = gaudin_operators((2, 2, 2), (0, 1, 3))
    out = spectrum(fam)
    x = sympy.Symbol("x")
    for i, g in enumerate(fam.operators):
        joint = sympy.Integer(1)
        for block in out["blocks"]:
            p = sum(sympy.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(reversed(block["charpolys"][i])))
            # each singular vector of weight w spans a copy of the (w+1)-dimensional irrep
            joint *= p ** (block["weight"] + 1)
        assert sympy.expand(joint - _charpoly(g)) == 0


# -- Weyl realisation ------------------------------------------------------------------------

def test_single_site_relations():
    L = Poly.var("L1")
    ops = weyl_sl2(1, 0, L)
    e, f, h = ops["e"], ops["f"], ops["h"]
    assert e.commutator(f) == h
    assert h.commutator(e) == e * 2
    assert h.commutator(f) == f * -2


def test_action_on_constants():
    L = Poly.var("L1")
    ops = weyl_sl2(1, 0, L)
    one = Poly.const(1)
    assert ops["f"].apply(one, ["x1"]).is_zero()
    assert ops["h"].apply(one, ["x1"]) == RatFunc(L)


def test_gaudin_weyl_on_constants():
    g = gaudin_weyl(2, 1)
    L1, L2, t1, t2 = (Poly.var(n) for n in ("L1", "L2", "t1", "t2"))
    assert g.apply(Poly.const(1), ["x1", "x2"]) == RatFunc(L1 * L2 * Fraction(1, 2), t1 - t2)


@pytest.mark.parametrize("n", [2, 3])
def test_weyl_family_commutes(n):
    ops = [gaudin_weyl(n, i) for i in range(1, n + 1)]
    for a, b in combinations(ops, 2):
        assert a.commutator(b).is_zero()


def test_weyl_numeric_specialisation_commutes():
    ops = [gaudin_weyl(3, i, weights=[1, 2, -3], points=[0, 1, 5]) for i in (1, 2, 3)]
    assert all(a.commutator(b).is_zero() for a, b in combinations(ops, 2))
    assert not ops[0].is_zero()


def test_weyl_site_range():
    with pytest.raises(ValueError):
        gaudin_weyl(3, 0)
    with pytest.raises(ValueError):
        gaudin_weyl(3, 4)


def test_weyl_sum_commutes_with_diagonal_f():
    n = 3
    total_f = WeylElement(n)
    for k in range(n):
        total_f = total_f + weyl_sl2(n, k, Poly.var(f"L{k + 1}"))["f"]
    assert gaudin_weyl(n, 2).commutator(total_f).is_zero()
