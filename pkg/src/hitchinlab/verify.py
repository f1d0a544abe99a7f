"""Self-check suites, one per module, each returning a JSON-ready report with a ``pass`` flag.

``quick=True`` runs reduced sizes.  All randomness is seeded, so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from . import bundles_p1, garnier, gaudin, liedata, opers, spectral
from .elliptic_cm import (
    CMState,
    Torus,
    cm_flow,
    cm_lax,
    h2_direct,
    lame_hermite,
    theta,
    theta_periodic,
    theta_prime0,
    trace_power_constant,
    wp,
    wp_invariants,
    wp_prime,
)
from .exactalg import Series

__all__ = ["SUITES", "run_suite"]

TAUS = (1j, 0.5 + 1j, 2j)

# real positions and momenta; imaginary coupling makes the pair potential
# repulsive (c^2 < 0), so the particles never collide
CM_DATA = {
    2: dict(q=[0.1, 0.55], p=[0.3, -0.2], c=0.3j),
    3: dict(q=[0.1, 0.45, 0.8], p=[0.15, -0.1, 0.05], c=0.3j),
}


def garnier_involution(quick: bool = False) -> dict:
    cases = [dict(t=range(n)) for n in ((4, 5) if quick else (4, 5, 6))]
    cases += [dict(t=[0, 1, 3, 7, 12][:n], symbolic=True) for n in ((4,) if quick else (4, 5))]
    reports = [garnier.check_involution(garnier.GarnierData(tuple(c["t"]), symbolic=c.get("symbolic", False))) for c in cases]
    return {"cases": reports, "pass": all(r["all_zero"] for r in reports)}


def garnier_sums(quick: bool = False) -> dict:
    pts = [0, 1, 3, 7, 12, Fraction(1, 2)]
    reports = []
    for n in (4, 5) if quick else (4, 5, 6):
        r = garnier.sum_identities_check(garnier.GarnierData(tuple(pts[:n])), samples=2)
        reports.append({"n": n, "reductions": {k: v["zero"] for k, v in r["reductions"].items()}, "all_zero": r["all_zero"]})
    return {"cases": reports, "pass": all(r["all_zero"] for r in reports)}


def garnier_flow(quick: bool = False, drift_tol: float = 1e-6) -> dict:
    data = garnier.GarnierData((0, 1, 3, 7))
    state = garnier.constrained_state(4, random.Random(0), exact=False, scale=1.0)
    t_end = 0.2 if quick else 1.0
    good = garnier.hamilton_flow(data, 1, state, t_end, 1e-3)
    bad = garnier.hamilton_flow(data, 1, state, t_end, 1e-3, sign=-1)
    iso = spectral.isospectrality_check(data, good)
    rep = good.report()
    return {
        "flow": rep,
        "isospectral_drift": iso["max_drift"],
        "broken_flow_drift": bad.report()["max_hamiltonian_drift"],
        "pass": rep["max_hamiltonian_drift"] < drift_tol
        and max(rep["constraint_drift"]) < 1e-8
        and iso["pass"]
        and bad.report()["max_hamiltonian_drift"] > 1e3 * drift_tol,
    }


def spectral_genus(quick: bool = False) -> dict:
    pts = [0, 1, 3, 7, 12, -2, -5, 20]
    rows = []
    for n in range(4, 7 if quick else 9):
        data = garnier.GarnierData(tuple(pts[:n]))
        curve = spectral.spectral_curve(data, garnier.constrained_state(n, random.Random(n)))
        rows.append({"n": n, "deg_a": spectral.degree(curve.a), "deg_b": spectral.degree(curve.b), "genus": curve.genus})
    rh = all(
        spectral.riemann_hurwitz_genus(n, g, 2 * n * (g - 1)) == n * n * (g - 1) + 1
        for n in range(1, 7)
        for g in (2, 3, 4)
    )
    ok = all(r["deg_a"] == r["n"] - 4 and r["deg_b"] == r["n"] and r["genus"] == r["n"] - 3 for r in rows)
    return {"curves": rows, "riemann_hurwitz": rh, "pass": ok and rh}


def bundles_oracle(quick: bool = False) -> dict:
    rng = random.Random(7)
    per_m = 20 if quick else 200
    mismatches = []
    for m in range(2, 9):
        for _ in range(per_m):
            coeffs = [Fraction(rng.choice([0, 0, 0, 1, -1, 2, -3]), rng.choice([1, 1, 2, 3])) for _ in range(m - 1)]
            data = bundles_p1.TransitionData(m, coeffs)
            st = bundles_p1.splitting_type(data)
            k_oracle = max(r for r in range(0, m + 2) if bundles_p1.hom_dimension_oracle(r, data) > 0)
            hankel_ok = m % 2 or (bundles_p1.hankel_determinant(coeffs) != 0) == (st.k == m // 2)
            if k_oracle != st.k or not hankel_ok:
                mismatches.append({"m": m, "coeffs": [str(c) for c in coeffs]})
    return {"samples_per_m": per_m, "mismatches": mismatches, "pass": not mismatches}


def _random_points(rng: np.random.Generator, tau: complex, size: int) -> np.ndarray:
    a, b = rng.uniform(-0.5, 0.5, size), rng.uniform(-0.5, 0.5, size)
    return a + b * tau


def elliptic_identities(quick: bool = False, tol: float = 1e-10) -> dict:
    rng = np.random.default_rng(2024)
    size = 30 if quick else 100
    rows = []
    for tau in TAUS:
        torus = Torus(tau)
        z, q = _random_points(rng, tau, size), _random_points(rng, tau, size)
        t0 = theta_prime0(torus)
        lhs = t0**2 * theta(z + q, torus) * theta(z - q, torus) / (theta(z, torus) ** 2 * theta(q, torus) ** 2)
        identity = float(np.max(np.abs(lhs - (wp(q, torus) - wp(z, torus)))))
        odd = float(np.max(np.abs(theta(-z, torus) + theta(z, torus))))
        tp = theta_periodic(z, torus)
        shift_1 = float(np.max(np.abs(theta_periodic(z + 1, torus) - tp)))
        shift_tau = float(np.max(np.abs(theta_periodic(z + tau, torus) + np.exp(-2j * np.pi * z) * tp)))
        g2, g3 = wp_invariants(torus)
        w, dw = wp(z, torus), wp_prime(z, torus)
        ode = float(np.max(np.abs(dw**2 - 4 * w**3 + g2 * w + g3) / (np.abs(dw) ** 2 + np.abs(w) ** 3 + 1)))
        a = 0.2 + 0.3j
        hz = lame_hermite(z, a, torus)
        lame = float(max(np.max(np.abs(lame_hermite(z + 1, a, torus) / hz - 1)), np.max(np.abs(lame_hermite(z + tau, a, torus) / hz - 1))))
        checks = {
            "theta_wp_identity": identity,
            "theta_odd": odd,
            "theta_shift_1": shift_1,
            "theta_shift_tau": shift_tau,
            "wp_ode_residual": ode,
            "lame_hermite_periodicity": lame,
        }
        bounds = {"theta_odd": 1e-12, "wp_ode_residual": 1e-8}
        rows.append({
            "tau": [tau.real, tau.imag],
            "checks": checks,
            "pass": all(v < bounds.get(k, tol) for k, v in checks.items()),
        })
    return {"tol": tol, "tori": rows, "pass": all(r["pass"] for r in rows)}


def lax_checks(state: CMState, torus: Torus, samples: int = 20, seed: int = 5) -> dict:
    """z-independence of ``tr phi^2 - n(n-1) c^2 wp(z)`` and the circle fit of ``H_2``."""
    rng = np.random.default_rng(seed)
    zs = 0.05 + 0.4 * rng.uniform(size=samples) + 1j * torus.tau.imag * (0.05 + 0.4 * rng.uniform(size=samples))
    phi = cm_lax(state, zs, torus)
    tr2 = np.trace(phi @ phi, axis1=-2, axis2=-1)
    w = wp(zs, torus)
    n, c2 = state.n, state.c**2
    minus = tr2 - n * (n - 1) * c2 * w
    plus = tr2 + n * (n - 1) * c2 * w
    h2 = h2_direct(state, torus)
    return {
        "minus_form_spread": float(np.max(np.abs(minus - minus[0]))),
        "minus_form_vs_h2": float(np.max(np.abs(minus - h2))),
        "plus_form_spread": float(np.max(np.abs(plus - plus[0]))),
        "h2_fit_error": abs(trace_power_constant(state, torus, 2) - h2),
    }


def cm_conservation(quick: bool = False, drift_tol: float = 1e-6) -> dict:
    torus = Torus(1j)
    t_end = 0.2 if quick else 1.0
    rows = []
    for n, data in CM_DATA.items():
        state = CMState(**data)
        coarse = cm_flow(state, torus, t_end, 1e-3).drift()
        fine = cm_flow(state, torus, t_end, 5e-4).drift()
        lax = lax_checks(state, torus)
        bounds = [drift_tol] + ([10 * drift_tol] if n >= 3 else [])
        row = {
            "n": n,
            "drift_step_1e-3": coarse,
            "drift_step_5e-4": fine,
            "halving_ratio": [a / b if b else float("inf") for a, b in zip(coarse[1:], fine[1:])],
            "lax": lax,
        }
        row["pass"] = (
            all(d < b for d, b in zip(coarse[1:], bounds))
            and all(r >= 3.5 for r in row["halving_ratio"])
            and lax["minus_form_spread"] < 1e-8
            and lax["h2_fit_error"] < 1e-8
        )
        rows.append(row)
    return {"systems": rows, "pass": all(r["pass"] for r in rows)}


def gaudin_commutativity(quick: bool = False) -> dict:
    cases = [((2, 2), (0, 1)), ((2, 2, 2), (0, 1, 3)), ((2, 2, 3), (0, Fraction(1, 2), 3))]
    if not quick:
        cases.append(((2, 2, 2, 2), (0, 1, 3, Fraction(-2, 7))))
    reports = [gaudin.commutativity_check(gaudin.gaudin_operators(d, t)) for d, t in cases]
    weyl = []
    for n in (2, 3) if quick else (2, 3, 4):
        ops = [gaudin.gaudin_weyl(n, i) for i in range(1, n + 1)]
        weyl.append({"n": n, "commute": all(ops[i].commutator(ops[j]).is_zero() for i in range(n) for j in range(i + 1, n))})
    return {
        "matrix": [{"dims": r["dims"], "pass": r["pass"]} for r in reports],
        "weyl": weyl,
        "pass": all(r["pass"] for r in reports) and all(w["commute"] for w in weyl),
    }


def _random_change(rng: random.Random, order: int) -> Series:
    coeffs = [0, Fraction(rng.choice([1, -1, 2, 3]), rng.choice([1, 2]))]
    coeffs += [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(4)]
    return Series(coeffs, order)


def opers_suite(quick: bool = False, order: int = 16) -> dict:
    rng = random.Random(11)
    mobius = all(
        opers.schwarzian(opers.mobius_series(a, b, c, d, order)).is_zero()
        for a, b, c, d in [(1, 0, 0, 1), (2, 1, 3, 5), (1, -2, 4, 7), (Fraction(1, 3), 2, -1, 1)]
    )
    cocycle_bad = 0
    for _ in range(10 if quick else 50):
        s, r = _random_change(rng, order), _random_change(rng, order)
        lhs = opers.schwarzian(s.compose(r))
        rhs = opers.schwarzian(s).compose(r.truncate(order - 3)) * r.derivative().truncate(order - 3) ** 2 + opers.schwarzian(r)
        cocycle_bad += not lhs.agrees_with(rhs)
    functorial_bad = wronskian_bad = 0
    for _ in range(5 if quick else 20):
        u = opers.HillOperator(Series([Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(5)], order))
        s, r = _random_change(rng, order), _random_change(rng, order)
        two_step = opers.transform_hill(opers.transform_hill(u, s), r)
        one_step = opers.transform_hill(u, r.compose(s))
        functorial_bad += not two_step.u.agrees_with(one_step.u)
        a, b = opers.solve_hill(u)
        w = opers.wronskian(a, b)
        wronskian_bad += not (w[0] == 1 and all(c == 0 for c in w.coeffs[1:]))
    return {
        "mobius_schwarzian_zero": mobius,
        "cocycle_failures": cocycle_bad,
        "functoriality_failures": functorial_bad,
        "wronskian_failures": wronskian_bad,
        "pass": mobius and not (cocycle_bad or functorial_bad or wronskian_bad),
    }


def liedata_dims(quick: bool = False) -> dict:
    bad = []
    for fam in liedata.FAMILIES:
        for n in range(1, 9):
            g_data = liedata.group_data(fam, n)
            if sum(2 * d - 1 for d in g_data.degrees) != g_data.dim:
                bad.append({"family": fam, "n": n, "check": "sum formula"})
            if not g_data.degrees:
                continue
            for g in (2, 3, 4):
                if spectral.hitchin_base_dim(list(g_data.degrees), g) != liedata.bun_dim(g_data.dim, g_data.center_dim, g):
                    bad.append({"family": fam, "n": n, "g": g, "check": "base = bun"})
    return {"failures": bad, "pass": not bad}


SUITES = {
    "garnier_involution": garnier_involution,
    "garnier_sums": garnier_sums,
    "garnier_flow": garnier_flow,
    "spectral_genus": spectral_genus,
    "bundles_oracle": bundles_oracle,
    "elliptic_identities": elliptic_identities,
    "cm_conservation": cm_conservation,
    "gaudin_commutativity": gaudin_commutativity,
    "opers": opers_suite,
    "liedata": liedata_dims,
}


def run_suite(name: str, quick: bool = False) -> dict:
    return SUITES[name](quick=quick)
