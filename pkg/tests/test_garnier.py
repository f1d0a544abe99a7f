import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitchinlab.exactalg import Poly, RatFunc
from hitchinlab.garnier import (
    FlowError,
    GarnierData,
    PhaseState,
    check_involution,
    constrained_state,
    garnier_hamiltonians,
    hamilton_flow,
    implicit_midpoint,
    mat_det,
    mat_mul,
    mat_trace,
    moment_constraints,
    pnames,
    residue_matrices,
    sum_identities_check,
    trace_pairing,
    ynames,
)


def _values(matrix, values):
    return [[entry.evaluate(values) for entry in row] for row in matrix]


def test_data_validation():
    with pytest.raises(ValueError):
        GarnierData((0, 1, 2))
    with pytest.raises(ValueError):
        GarnierData((0, 1, 1, 2))
    with pytest.raises(ValueError):
        GarnierData((0, 1, 2, 3), lam=(1, 2))


def test_untwisted_residue_matrix_shape():
    data = GarnierData((0, 1, 3, 7))
    A = residue_matrices(data)[0]
    y, p = Poly.var("y1"), Poly.var("p1")
    assert A[0][0] == p * y and A[0][1] == -p * y * y
    assert A[1][0] == p and A[1][1] == -p * y


def test_twisted_residue_matrix_at_a_point():
    data = GarnierData((0, 1, 3, 7), lam=(1, 0, 0, 0))
    A = residue_matrices(data)[0]
    assert _values(A, {"y1": 0, "p1": 2}) == [[-1, 0], [2, 1]]


def test_zero_momentum_gives_zero_matrix():
    A = residue_matrices(GarnierData((0, 1, 3, 7)))[2]
    assert _values(A, {"y3": 5, "p3": 0}) == [[0, 0], [0, 0]]


def test_residue_matrix_invariants():
    data = GarnierData((0, 1, 3, 7, 12), symbolic=True)
    mats = residue_matrices(data)
    lam = data.lambdas()
    for i, A in enumerate(mats):
        assert mat_trace(A).is_zero()
        assert mat_det(A) == -lam[i] * lam[i]
    for i in range(data.n):
        for j in range(data.n):
            if i != j:
                assert mat_trace(mat_mul(mats[i], mats[j])) == trace_pairing(data, i, j)


def test_trace_pairing_formula():
    data = GarnierData((0, 1, 3, 7), symbolic=True)
    yi, yj, pi, pj = (Poly.var(n) for n in ("y1", "y2", "p1", "p2"))
    li, lj = Poly.var("lam1"), Poly.var("lam2")
    expected = -((yi - yj) ** 2) * pi * pj + 2 * (li * pj - lj * pi) * (yi - yj) + 2 * li * lj
    assert trace_pairing(data, 0, 1) == expected


def test_untwisted_hamiltonians_match_closed_form():
    t = (0, 1, 3, 7, Fraction(1, 2))
    hams = garnier_hamiltonians(GarnierData(t))
    y = [Poly.var(n) for n in ynames(5)]
    p = [Poly.var(n) for n in pnames(5)]
    for i in range(5):
        expected = RatFunc(0)
        for j in range(5):
            if j != i:
                expected = expected + RatFunc(p[i] * p[j] * (y[i] - y[j]) ** 2) / (Fraction(t[j]) - Fraction(t[i]))
        assert hams[i] == expected


def test_zero_momenta_give_zero_hamiltonians():
    hams = garnier_hamiltonians(GarnierData((0, 1, 3, 7)))
    vals = {**{n: k for k, n in enumerate(ynames(4))}, **{n: 0 for n in pnames(4)}}
    assert all(h.evaluate(vals) == 0 for h in hams)


def test_hamiltonians_are_residues_of_half_trace_square():
    data = GarnierData((0, 1, 3, 7), lam=(Fraction(1, 3), 0, Fraction(-1, 2), 1))
    rng = random.Random(4)
    vals = {n: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for n in ynames(4) + pnames(4)}
    mats = [np.array(_values(A, vals), dtype=float) for A in residue_matrices(data)]
    t = [float(v) for v in data.t]
    hams = garnier_hamiltonians(data)
    for i in range(4):
        zs = t[i] + 0.1 * np.exp(2j * np.pi * np.arange(12) / 12)
        samples = []
        for z in zs:
            phi = sum(A / (z - tj) for A, tj in zip(mats, t))
            samples.append(0.5 * np.trace(phi @ phi) * (z - t[i]))
        assert abs(np.mean(samples) - float(hams[i].evaluate(vals))) < 1e-9


def test_involution_untwisted_n4():
    report = check_involution(GarnierData((0, 1, 2, 3)))
    assert len(report["pairs"]) == 6
    assert report["all_zero"]


def test_involution_symbolic_twist_n4():
    assert check_involution(GarnierData((0, 1, 3, 7), symbolic=True))["all_zero"]


def test_involution_size_bound():
    with pytest.raises(ValueError):
        check_involution(GarnierData(tuple(range(7))))


def test_moment_constraints_examples():
    assert moment_constraints(PhaseState([0, 1, 2, 3], [0, 0, 0, 0])) == (0, 0, 0)
    assert moment_constraints(PhaseState([0, 1, 2, 3], [1, -3, 3, -1])) == (0, 0, 0)
    y1 = Fraction(7, 3)
    assert moment_constraints(PhaseState([y1, 1, 2, 5], [1, 0, 0, 0])) == (1, y1, y1 * y1)


@given(st.integers(4, 8), st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_constrained_states_are_admissible(n, seed):
    state = constrained_state(n, random.Random(seed))
    assert moment_constraints(state) == (0, 0, 0)


def test_sum_identities_n4():
    report = sum_identities_check(GarnierData((0, 1, 3, 7)), samples=2)
    assert all(r["zero"] for r in report["reductions"].values())
    assert report["all_zero"]


def test_sum_identities_off_shell_control():
    F = Fraction
    off = PhaseState([F(1), F(2), F(5), F(-1)], [F(1), F(2), F(-1), F(3)])
    report = sum_identities_check(GarnierData((0, 1, 3, 7)), samples=1, off_shell=off)
    assert not report["off_shell"]["on_shell"]
    # sum G_i vanishes identically; the higher moments detect the violation
    assert report["off_shell"]["values"]["sum t^0 G"] == "0"
    assert report["off_shell"]["nonzero"] == ["sum t^1 G", "sum t^2 G"]


def test_sum_identities_reject_twisted():
    with pytest.raises(ValueError):
        sum_identities_check(GarnierData((0, 1, 3, 7), lam=(1, 0, 0, 0)))


# -- numerical flows ---------------------------------------------------------------------

DATA4 = GarnierData((0, 1, 3, 7))


def _state():
    return constrained_state(4, random.Random(0), exact=False, scale=1.0)


def test_zero_momenta_is_a_fixed_point():
    state = PhaseState([0.1, 0.5, 1.0, 2.0], [0.0] * 4)
    traj = hamilton_flow(DATA4, 1, state, 0.05, 1e-3)
    assert np.all(traj.y == traj.y[0])
    assert np.max(traj.drift()) == 0


@pytest.fixture(scope="module")
def flows():
    state = _state()
    return hamilton_flow(DATA4, 1, state, 1.0, 1e-3), hamilton_flow(DATA4, 1, state, 1.0, 5e-4)


def test_flow_conserves_all_hamiltonians(flows):
    coarse, _ = flows
    assert np.max(coarse.drift()) < 1e-8
    assert np.max(coarse.constraint_drift()) < 1e-8


def test_flow_drift_is_second_order(flows):
    coarse, fine = flows
    assert np.max(coarse.drift()) / np.max(fine.drift()) >= 3.5


def test_flow_moves_the_state(flows):
    coarse, _ = flows
    assert np.max(np.abs(coarse.y[-1] - coarse.y[0])) > 1e-2


def test_wrong_sign_flow_breaks_conservation():
    traj = hamilton_flow(DATA4, 1, _state(), 1.0, 1e-3, sign=-1)
    assert np.max(traj.drift()) > 1e-3


def test_nonconvergence_reports_step_index():
    # bounded but strongly expanding fixed-point map
    with pytest.raises(FlowError) as info:
        list(implicit_midpoint(lambda z: 50 * np.cos(z), np.array([0.3]), 1.0, 5, max_iter=5))
    assert info.value.step_index == 1


@pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
def test_overflow_reports_step_index():
    with pytest.raises(FlowError) as info:
        list(implicit_midpoint(lambda z: z**3, np.array([10.0]), 1.0, 5, max_iter=5))
    assert info.value.step_index == 1


def test_flow_rejects_symbolic_twist():
    with pytest.raises(ValueError):
        hamilton_flow(GarnierData((0, 1, 3, 7), symbolic=True), 1, _state(), 0.1, 1e-3)
