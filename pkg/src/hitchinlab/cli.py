"""Command-line front end.

Every command prints one JSON document with ``"schema": 1``.  Exit status is
0 when all checks pass, 1 when an identity or drift check fails and 2 on bad
input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import bundles_p1, garnier, gaudin, liedata, opers, spectral, verify
from .elliptic_cm import CMState, CollisionError, Torus, cm_flow
from .exactalg import Series, as_fraction

SCHEMA = 1


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    identity_tol: float = 1e-10
    drift_tol: float = 1e-6
    order: int = 16
    step: float = 1e-3
    jobs: int = 1
    csv: str | None = None

    def __post_init__(self):
        if self.identity_tol <= 0 or self.drift_tol <= 0:
            raise InputError("tolerances must be positive")
        if self.order < 4:
            raise InputError("series order must be at least 4")
        if self.step <= 0:
            raise InputError("step must be positive")
        if self.jobs < 1:
            raise InputError("jobs must be at least 1")


def load_config(path: str | None) -> RunConfig:
    """Config file (TOML or JSON by extension), then ``HITCHINLAB_PRECISION``."""
    values = {}
    if path:
        p = Path(path)
        try:
            if p.suffix == ".toml":
                values = tomllib.loads(p.read_text())
            elif p.suffix == ".json":
                values = json.loads(p.read_text())
            else:
                raise InputError(f"config must be .toml or .json, got {p.name}")
        except (OSError, tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        unknown = set(values) - known
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(sorted(unknown))}")
    env = os.environ.get("HITCHINLAB_PRECISION")
    if env:
        try:
            values["identity_tol"] = float(env)
        except ValueError as exc:
            raise InputError(f"HITCHINLAB_PRECISION is not a number: {env!r}") from exc
    return RunConfig(**values)


# -- serialisation -------------------------------------------------------------

def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        # JSON has no literal for these
        return json.dumps(str(x))
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and stable key order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, float):
        return _format_float(obj)
    return json.dumps(obj)


def emit(report: dict, ok: bool) -> int:
    body = {"schema": SCHEMA, **to_jsonable(report), "pass": bool(ok)}
    sys.stdout.write(dumps(body) + "\n")
    return 0 if ok else 1


# -- input parsing ---------------------------------------------------------------

def _rationals(text: str) -> list[Fraction]:
    try:
        return [as_fraction(tok.strip()) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational list {text!r}: {exc}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse integer list {text!r}") from exc


def _read_json(path: str):
    """JSON file with decimal literals read as exact rationals."""
    try:
        return json.loads(Path(path).read_text(), parse_float=Fraction)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _rational(v) -> Fraction:
    try:
        return as_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {v!r}") from exc


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, Fraction)):
        return complex(float(v))
    raise InputError(f"expected [re, im], got {v!r}")


def _garnier_input(args) -> tuple[garnier.GarnierData, garnier.PhaseState | None]:
    if args.data:
        raw = _read_json(args.data)
        try:
            t = [_rational(v) for v in raw["t"]]
            lam = [_rational(v) for v in raw["lambda"]] if raw.get("lambda") else None
            state = None
            if "y" in raw and "p" in raw:
                state = garnier.PhaseState([_rational(v) for v in raw["y"]], [_rational(v) for v in raw["p"]])
                if len(state.y) != len(t):
                    raise InputError("state length does not match the number of marked points")
        except KeyError as exc:
            raise InputError(f"state file lacks key {exc}") from exc
        return garnier.GarnierData(tuple(t), tuple(lam) if lam else None), state
    t = _rationals(args.points) if args.points else list(range(args.n))
    if len(t) != args.n:
        raise InputError("--points must list exactly N values")
    return garnier.GarnierData(tuple(t)), None


# -- commands --------------------------------------------------------------------

def cmd_classify_p1(args, cfg) -> int:
    coeffs = _rationals(args.coeffs) if args.coeffs else []
    data = bundles_p1.TransitionData(args.m, coeffs)
    st = bundles_p1.splitting_type(data)
    hankel = bundles_p1.hankel_determinant(coeffs) if args.m % 2 == 0 else None
    return emit({"m": args.m, "k": st.k, "type": f"O({st.k})+O({args.m - st.k})", "hankel": hankel}, True)


def cmd_garnier_check(args, cfg) -> int:
    if args.data:
        data, _ = _garnier_input(args)
    else:
        t = _rationals(args.points) if args.points else list(range(args.n))
        if len(t) != args.n:
            raise InputError("--points must list exactly N values")
        data = garnier.GarnierData(tuple(t), symbolic=args.twisted)
    report = garnier.check_involution(data)
    ok = report["all_zero"]
    if not data.twisted:
        sums = garnier.sum_identities_check(data, samples=2)
        report["sum_identities"] = {k: v["zero"] for k, v in sums["reductions"].items()}
        ok = ok and sums["all_zero"]
    return emit(report, ok)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_format_float(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def cmd_garnier_flow(args, cfg) -> int:
    data, state = _garnier_input(args)
    if state is None:
        state = garnier.constrained_state(data.n, random.Random(args.seed), exact=False)
    step = args.step or cfg.step
    traj = garnier.hamilton_flow(data, args.h, state, args.t_end, step)
    report = traj.report()
    report["isospectrality"] = spectral.isospectrality_check(data, traj)
    csv_path = args.csv or cfg.csv
    if csv_path:
        n = data.n
        header = ["t"] + garnier.ynames(n) + garnier.pnames(n) + [f"G{i + 1}" for i in range(n)]
        _write_csv(csv_path, header, ([t, *y, *p, *h] for t, y, p, h in zip(traj.times, traj.y, traj.p, traj.hamiltonians)))
        report["csv"] = csv_path
    ok = report["max_hamiltonian_drift"] < cfg.drift_tol and report["isospectrality"]["pass"]
    return emit(report, ok)


def cmd_garnier_spectral(args, cfg) -> int:
    data, state = _garnier_input(args)
    if state is None:
        state = garnier.constrained_state(data.n, random.Random(args.seed))
    curve = spectral.spectral_curve(data, state)
    report = curve.to_json()
    report["a"] = [Fraction(c) for c in curve.a]
    report["b"] = [Fraction(c) for c in curve.b]
    return emit(report, not curve.degenerate)


def _cm_input(path: str) -> tuple[CMState, Torus]:
    raw = _read_json(path)
    try:
        torus = Torus(_complex(raw["tau"]))
        state = CMState([_complex(v) for v in raw["q"]], [_complex(v) for v in raw["p"]], _complex(raw["c"]))
    except KeyError as exc:
        raise InputError(f"cm data lacks key {exc}") from exc
    return state, torus


def cmd_cm_flow(args, cfg) -> int:
    state, torus = _cm_input(args.data)
    step = args.step or cfg.step
    try:
        traj = cm_flow(state, torus, args.t_end, step)
    except CollisionError as exc:
        return emit({"error": str(exc), "step_index": exc.step_index}, False)
    report = traj.report()
    csv_path = args.csv or cfg.csv
    if csv_path:
        n = state.n
        header = ["t"] + [f"q{i + 1}_{part}" for i in range(n) for part in ("re", "im")]
        header += [f"p{i + 1}_{part}" for i in range(n) for part in ("re", "im")]
        header += [f"H{k + 1}_{part}" for k in range(len(traj.hamiltonians[0])) for part in ("re", "im")]

        def flat(vals):
            return [x for v in vals for x in (float(np.real(v)), float(np.imag(v)))]

        _write_csv(csv_path, header, ([t, *flat(q), *flat(p), *flat(h)] for t, q, p, h in zip(traj.times, traj.q, traj.p, traj.hamiltonians)))
        report["csv"] = csv_path
    drift = traj.drift()
    bounds = [cfg.drift_tol, cfg.drift_tol, 10 * cfg.drift_tol]
    ok = all(d < b for d, b in zip(drift, bounds))
    return emit(report, ok)


def cmd_cm_verify(args, cfg) -> int:
    tol = args.tol or cfg.identity_tol
    report = verify.elliptic_identities(quick=args.quick, tol=tol)
    return emit(report, report["pass"])


def cmd_gaudin_check(args, cfg) -> int:
    fam = gaudin.gaudin_operators(_ints(args.dims), _rationals(args.points))
    report = gaudin.commutativity_check(fam)
    return emit(report, report["pass"])


def cmd_gaudin_spectrum(args, cfg) -> int:
    fam = gaudin.gaudin_operators(_ints(args.dims), _rationals(args.points))
    return emit(gaudin.spectrum(fam), True)


def _series_from(value, order: int) -> Series:
    coeffs = value["coeffs"] if isinstance(value, dict) else value
    if not isinstance(coeffs, list):
        raise InputError("series must be a coefficient list or {\"coeffs\": [...]}")
    order = value.get("order", order) if isinstance(value, dict) else order
    return Series([_rational(c) for c in coeffs], max(order, len(coeffs) - 1))


def cmd_oper_schwarzian(args, cfg) -> int:
    order = args.order or cfg.order
    s = Series(_rationals(args.series), order)
    d = opers.schwarzian(s)
    return emit({"order": d.order, "coeffs": list(d.coeffs)}, True)


def cmd_oper_transform(args, cfg) -> int:
    order = args.order or cfg.order
    u = opers.HillOperator(_series_from(_read_json(args.u), order))
    s = _series_from(_read_json(args.s), order)
    v = opers.transform_hill(u, s)
    return emit({"order": v.order, "coeffs": list(v.u.coeffs)}, True)


def cmd_dims(args, cfg) -> int:
    gd = liedata.group_data(args.group, args.n)
    bun = liedata.bun_dim(gd.dim, gd.center_dim, args.genus)
    base = spectral.hitchin_base_dim(list(gd.degrees), args.genus) if gd.degrees else 0
    return emit({
        "group": f"{gd.family}_{gd.n}",
        "degrees": list(gd.degrees),
        "dim_g": gd.dim,
        "dim_z": gd.center_dim,
        "bun_dim": bun,
        "base_dim": base,
    }, base == bun)


def _suite_worker(job):
    name, quick = job
    return name, verify.run_suite(name, quick)


def cmd_verify_all(args, cfg) -> int:
    names = list(verify.SUITES)
    if args.only:
        wanted = [s.strip() for s in args.only.split(",")]
        unknown = set(wanted) - set(names)
        if unknown:
            raise InputError(f"unknown suites: {', '.join(sorted(unknown))}")
        names = [n for n in names if n in wanted]
    jobs = args.jobs or cfg.jobs
    work = [(n, args.quick) for n in names]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_worker, work))
    else:
        results = [_suite_worker(w) for w in work]
    # pool.map preserves submission order, so output is independent of jobs
    suites = {name: rep for name, rep in results}
    summary = {name: rep["pass"] for name, rep in suites.items()}
    return emit({"quick": args.quick, "summary": summary, "suites": suites}, all(summary.values()))


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hitchinlab", description="Exact and numerical checks for Hitchin-type integrable systems.")
    parser.add_argument("--config", help="TOML or JSON run configuration")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify-p1", help="splitting type of [[1, f], [0, z^m]] on P^1")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--coeffs", default="", help="a_1,...,a_{m-1} (rationals)")
    p.set_defaults(func=cmd_classify_p1)

    g = sub.add_parser("garnier", help="Garnier system").add_subparsers(dest="action", required=True)
    p = g.add_parser("check", help="exact involution and sum identities")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--points", help="t_1,...,t_N (default 0..N-1)")
    p.add_argument("--twisted", action="store_true", help="symbolic twist parameters")
    p.add_argument("--data", help="state.json with t and lambda")
    p.set_defaults(func=cmd_garnier_check)
    for name, func, helptext in (
        ("flow", cmd_garnier_flow, "implicit-midpoint flow of G_h"),
        ("spectral", cmd_garnier_spectral, "spectral curve at a rational state"),
    ):
        p = g.add_parser(name, help=helptext)
        p.add_argument("--data", help='state.json: {"t": [...], "lambda": [...], "y": [...], "p": [...]}')
        p.add_argument("--n", type=int, default=4, help="number of points when no --data")
        p.add_argument("--points")
        p.add_argument("--seed", type=int, default=0, help="seed for a random admissible state")
        if name == "flow":
            p.add_argument("--h", type=int, default=1, help="index of the hamiltonian")
            p.add_argument("--t-end", type=float, default=1.0)
            p.add_argument("--step", type=float)
            p.add_argument("--csv", help="trajectory output")
        p.set_defaults(func=func)

    c = sub.add_parser("cm", help="elliptic Calogero-Moser").add_subparsers(dest="action", required=True)
    p = c.add_parser("flow", help="H2 flow with drift report")
    p.add_argument("--data", required=True, help='cm.json: {"tau": [re,im], "c": [re,im], "q": [...], "p": [...]}')
    p.add_argument("--t-end", type=float, default=1.0)
    p.add_argument("--step", type=float)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_cm_flow)
    p = c.add_parser("verify", help="theta / wp identity checks")
    p.add_argument("--tol", type=float)
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_cm_verify)

    q = sub.add_parser("gaudin", help="quantum Gaudin hamiltonians").add_subparsers(dest="action", required=True)
    for name, func in (("check", cmd_gaudin_check), ("spectrum", cmd_gaudin_spectrum)):
        p = q.add_parser(name)
        p.add_argument("--dims", required=True, help="irrep dimensions, e.g. 2,2,3")
        p.add_argument("--points", required=True, help="distinct rational points")
        p.set_defaults(func=func)

    o = sub.add_parser("oper", help="Hill operators on the formal disk").add_subparsers(dest="action", required=True)
    p = o.add_parser("schwarzian")
    p.add_argument("--series", required=True, help="coefficients s_0,s_1,...")
    p.add_argument("--order", type=int)
    p.set_defaults(func=cmd_oper_schwarzian)
    p = o.add_parser("transform")
    p.add_argument("--u", required=True, help="JSON potential coefficients")
    p.add_argument("--s", required=True, help="JSON coordinate change coefficients")
    p.add_argument("--order", type=int)
    p.set_defaults(func=cmd_oper_transform)

    p = sub.add_parser("dims", help="Hitchin base and Bun_G dimensions")
    p.add_argument("--group", required=True, choices=liedata.FAMILIES, type=str.upper)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("verify-all", help="run every module's self-check suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--jobs", type=int)
    p.add_argument("--only", help="comma-separated suite names")
    p.set_defaults(func=cmd_verify_all)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (InputError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"hitchinlab: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
