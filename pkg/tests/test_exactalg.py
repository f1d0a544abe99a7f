from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitchinlab.exactalg import (
    Poly,
    RatFunc,
    Series,
    UnsupportedIdeal,
    WeylElement,
    as_fraction,
    poisson_bracket,
    reduce_mod_ideal,
    series_compose,
    variables,
)

y1, p1, y2, p2, a = variables("y1", "p1", "y2", "p2", "a")
PAIRS = [("y1", "p1"), ("y2", "p2")]
NAMES = ["y1", "p1", "y2", "p2"]


@st.composite
def polys(draw, names=NAMES, max_degree=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [draw(st.integers(0, max_degree)) for _ in names]
        while sum(exps) > max_degree:
            k = exps.index(max(exps))
            exps[k] -= 1
        mono = Poly.const(1)
        for n, e in zip(names, exps):
            mono = mono * Poly.var(n) ** e
        coeff = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
        terms[len(terms)] = mono * coeff
    return sum(terms.values(), Poly.const(0))


nonzero_polys = polys().filter(lambda f: not f.is_zero())


@st.composite
def series(draw, order=8, zero_constant=False):
    cs = [Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3))) for _ in range(order + 1)]
    if zero_constant:
        cs[0] = Fraction(0)
    return Series(cs, order)


# -- rationals and polynomials ---------------------------------------------------

def test_as_fraction_accepts_exact_inputs_and_rejects_floats():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(4) == 4
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_poly_arithmetic_and_degrees():
    f = (y1 + p1) ** 2
    assert f == y1**2 + 2 * y1 * p1 + p1**2
    assert f.total_degree() == 2
    assert f.degree("p1") == 2
    assert (f - f).is_zero()
    assert f.diff("y1") == 2 * y1 + 2 * p1


def test_poly_evaluate_and_subs():
    f = y1 * p1 + 3
    assert f.evaluate({"y1": 2, "p1": Fraction(1, 2)}) == 4
    assert f.subs({"p1": y1}) == y1**2 + 3


@given(polys(), polys(), polys())
@settings(max_examples=40, deadline=None)
def test_poly_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_product_rule(f, g):
    assert (f * g).diff("y1") == f.diff("y1") * g + f * g.diff("y1")


# -- rational functions ------------------------------------------------------------

def test_ratfunc_reduces_common_factors():
    r = RatFunc((y1 - p1) * (y1 + 1), (y1 - p1) * 2)
    assert r == RatFunc(y1 + 1, 2)
    assert r.is_polynomial()
    assert r.as_poly() == (y1 + 1) * Fraction(1, 2)


def test_ratfunc_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RatFunc(y1, 0)


@given(polys(), nonzero_polys)
@settings(max_examples=30, deadline=None)
def test_ratfunc_normal_form(f, g):
    rf = RatFunc(f, g + 7)
    assert (rf - rf).is_zero()
    assert (RatFunc(f) * RatFunc(g)) / RatFunc(g) == RatFunc(f)


def test_ratfunc_quotient_rule():
    r = RatFunc(Poly.const(1), y1)
    assert r.diff("y1") == RatFunc(Poly.const(-1), y1**2)


# -- Poisson brackets ----------------------------------------------------------------

def test_canonical_pair():
    assert poisson_bracket(p1, y1, PAIRS) == 1
    assert poisson_bracket(y1, p1, PAIRS) == -1


def test_bracket_of_py_with_p():
    # {p y, p} = p {y, p} = -p under {p, y} = +1
    assert poisson_bracket(p1 * y1, p1, PAIRS) == -p1


def test_undeclared_variable_rejected():
    with pytest.raises(ValueError):
        poisson_bracket(p1 * a, y1, PAIRS)
    assert poisson_bracket(p1 * a, y1, PAIRS, params=["a"]) == a


def test_bracket_of_rational_functions():
    f = RatFunc(p1, y1 - y2)
    assert poisson_bracket(f, y1, PAIRS) == RatFunc(Poly.const(1), y1 - y2)


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_bracket_antisymmetric(f, g):
    assert poisson_bracket(f, g, PAIRS) == -poisson_bracket(g, f, PAIRS)


@given(polys(), polys(), polys())
@settings(max_examples=30, deadline=None)
def test_bracket_leibniz(f, g, h):
    assert poisson_bracket(f, g * h, PAIRS) == poisson_bracket(f, g, PAIRS) * h + g * poisson_bracket(f, h, PAIRS)


@given(polys(), polys(), polys())
@settings(max_examples=30, deadline=None)
def test_jacobi_identity(f, g, h):
    def br(u, v):
        return poisson_bracket(u, v, PAIRS)

    assert (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).is_zero()


# -- reduction modulo p-linear ideals -------------------------------------------------------

def test_reduce_trivial_member():
    assert reduce_mod_ideal(p1 + p2, [p1 + p2], ["p1", "p2"]).is_zero()


def test_reduce_two_constraints_force_zero():
    gens = [p1 + p2, p1 * y1 + p2 * y2]
    assert reduce_mod_ideal(p1, gens, ["p1", "p2"]).is_zero()


def test_reduce_nonmember_survives():
    r = reduce_mod_ideal(p1 * y1 + 1, [p1 + p2], ["p1", "p2"])
    assert not r.is_zero()


def test_reduce_rejects_nonlinear_generators():
    with pytest.raises(UnsupportedIdeal):
        reduce_mod_ideal(p1, [p1 * p2], ["p1", "p2"])


# -- Weyl algebra ----------------------------------------------------------------------------

def test_weyl_canonical_commutator():
    x, d = WeylElement.x(2, 0), WeylElement.d(2, 0)
    assert d.commutator(x) == WeylElement.scalar(2, 1)
    assert d.commutator(WeylElement.x(2, 1)).is_zero()


def test_weyl_normal_ordering_of_d_squared_x_squared():
    x, d = WeylElement.x(1, 0), WeylElement.d(1, 0)
    # d^2 x^2 = x^2 d^2 + 4 x d + 2
    assert (d * d) * (x * x) == x * x * d * d + x * d * 4 + 2


def test_weyl_action_on_polynomials():
    x, d = WeylElement.x(1, 0), WeylElement.d(1, 0)
    op = x * d
    assert op.apply(y1**3, ["y1"]) == RatFunc(3 * y1**3)


@st.composite
def weyl_elements(draw):
    n = 2
    out = WeylElement(n)
    for _ in range(draw(st.integers(1, 3))):
        xs = tuple(draw(st.integers(0, 2)) for _ in range(n))
        ds = tuple(draw(st.integers(0, 2)) for _ in range(n))
        out = out + WeylElement(n, {(xs, ds): draw(st.integers(-3, 3))})
    return out


@given(weyl_elements(), weyl_elements(), weyl_elements())
@settings(max_examples=25, deadline=None)
def test_weyl_associative(u, v, w):
    assert (u * v) * w == u * (v * w)


# -- truncated series ------------------------------------------------------------------------

def test_compose_examples():
    t = Series.identity(6)
    s = Series([0, 1, 1], 6)
    assert series_compose(t, s) == s
    assert series_compose(t * t, s) == Series([0, 0, 1, 2, 1], 6)
    geo = Series.geometric(1, 6)
    assert series_compose(geo, Series([0, 2], 6)) == Series([2**k for k in range(7)], 6)


def test_compose_requires_zero_constant_term():
    with pytest.raises(ValueError):
        series_compose(Series.identity(4), Series([1, 1], 4))


def test_default_order():
    assert Series([1, 2]).order == 16


def test_derivative_lowers_order():
    assert Series([0, 1, 1], 5).derivative().order == 4


@given(series(), series(zero_constant=True), series(zero_constant=True))
@settings(max_examples=30, deadline=None)
def test_compose_associative(f, g, h):
    assert f.compose(g).compose(h) == f.compose(g.compose(h))


@given(series(zero_constant=True).filter(lambda s: s[1] != 0))
@settings(max_examples=30, deadline=None)
def test_reversion_is_inverse(s):
    r = s.reversion()
    assert s.compose(r) == Series.identity(s.order)
    assert r.compose(s) == Series.identity(s.order)


@given(series())
@settings(max_examples=30, deadline=None)
def test_sqrt_squares_back(s):
    s = Series([1, *s.coeffs[1:]], s.order)
    r = s.sqrt()
    assert r * r == s


@given(series().filter(lambda s: s[0] != 0))
@settings(max_examples=30, deadline=None)
def test_reciprocal(s):
    assert s * s.reciprocal() == Series.constant(1, s.order)
