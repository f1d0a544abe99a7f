import csv
import json

import pytest

from hitchinlab.cli import InputError, RunConfig, dumps, load_config, main, to_jsonable


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.out


def test_garnier_check(capsys):
    code, report, _ = run(capsys, "garnier", "check", "--n", "4")
    assert code == 0
    assert report["schema"] == 1 and report["pass"] is True
    assert len(report["pairs"]) == 6
    assert all(p["zero"] for p in report["pairs"])


def test_garnier_check_twisted(capsys):
    code, report, _ = run(capsys, "garnier", "check", "--n", "4", "--twisted")
    assert code == 0 and "sum_identities" not in report


def test_classify_p1(capsys):
    code, report, _ = run(capsys, "classify-p1", "--m", "2", "--coeffs", "0")
    assert code == 0 and report["k"] == 2
    code, report, _ = run(capsys, "classify-p1", "--m", "4", "--coeffs", "1,0,1/2")
    assert report["type"] == "O(2)+O(2)"
    # det [[1, 0], [0, 1/2]]
    assert report["hankel"] == "1/2"


def test_classify_rejects_wrong_length(capsys):
    code = main(["classify-p1", "--m", "3", "--coeffs", "1"])
    assert code == 2
    assert "hitchinlab: error" in capsys.readouterr().err


def test_bad_rational_is_input_error(capsys):
    code, report, _ = run(capsys, "classify-p1", "--m", "2", "--coeffs", "x")
    assert code == 2 and report is None


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_garnier_spectral_from_file(capsys, tmp_path):
    state = {"t": [0, 1, 3, 7], "y": [1, 2, 5, -1], "p": [1, -3, 3, -1]}
    path = tmp_path / "state.json"
    path.write_text(json.dumps(state))
    code, report, _ = run(capsys, "garnier", "spectral", "--data", str(path))
    assert set(report) >= {"a", "b", "genus"}
    assert all("/" in c for c in report["a"] + report["b"])
    assert code == (0 if report["genus"] is not None else 1)


def test_garnier_spectral_generated(capsys):
    code, report, _ = run(capsys, "garnier", "spectral", "--n", "5", "--points", "0,1,3,7,12", "--seed", "2")
    assert code == 0 and report["genus"] == 2


def test_garnier_flow_with_csv(capsys, tmp_path):
    out = tmp_path / "traj.csv"
    code, report, _ = run(capsys, "garnier", "flow", "--n", "4", "--t-end", "0.05", "--step", "1e-3", "--csv", str(out))
    assert code == 0 and report["isospectrality"]["pass"]
    rows = list(csv.reader(out.open()))
    assert rows[0][:2] == ["t", "y1"]
    assert len(rows) == 52


def test_cm_flow(capsys, tmp_path):
    data = {"tau": [0.5, 1], "c": [0, 0.3], "q": [[0.1, 0], [0.55, 0]], "p": [[0.3, 0], [-0.2, 0]]}
    path = tmp_path / "cm.json"
    path.write_text(json.dumps(data))
    out = tmp_path / "cm.csv"
    code, report, _ = run(capsys, "cm", "flow", "--data", str(path), "--t-end", "0.05", "--csv", str(out))
    assert code == 0
    assert report["drift"]["H2"] < 1e-6
    assert next(csv.reader(out.open()))[:3] == ["t", "q1_re", "q1_im"]


def test_cm_flow_collision_exit_code(capsys, tmp_path):
    data = {"tau": [0, 1], "c": [0, 0], "q": [[0, 0], [0.2, 0]], "p": [[0.5, 0], [-0.5, 0]]}
    path = tmp_path / "cm.json"
    path.write_text(json.dumps(data))
    code, report, _ = run(capsys, "cm", "flow", "--data", str(path), "--t-end", "0.5")
    assert code == 1 and report["step_index"] == 100


def test_cm_data_missing_key(capsys, tmp_path):
    path = tmp_path / "cm.json"
    path.write_text(json.dumps({"tau": [0, 1]}))
    code, _, _ = run(capsys, "cm", "flow", "--data", str(path))
    assert code == 2


def test_cm_verify_quick(capsys):
    code, report, _ = run(capsys, "cm", "verify", "--quick", "--tol", "1e-10")
    assert code == 0 and report["pass"]


def test_gaudin_commands(capsys):
    code, report, _ = run(capsys, "gaudin", "check", "--dims", "2,2,3", "--points", "0,1,3")
    assert code == 0 and report["diagonal_sl2"]
    assert report["points"] == ["0/1", "1/1", "3/1"]
    code, report, _ = run(capsys, "gaudin", "spectrum", "--dims", "2,2", "--points", "0,1/2")
    assert code == 0
    assert [b["weight"] for b in report["blocks"]] == [2, 0]


def test_gaudin_coincident_points(capsys):
    code, _, _ = run(capsys, "gaudin", "check", "--dims", "2,2", "--points", "1,1")
    assert code == 2


def test_oper_commands(capsys, tmp_path):
    code, report, _ = run(capsys, "oper", "schwarzian", "--series", "0,1,1", "--order", "8")
    assert code == 0
    assert report["coeffs"][:3] == ["-6/1", "24/1", "-72/1"]
    (tmp_path / "u.json").write_text("[0]")
    (tmp_path / "s.json").write_text('{"coeffs": [0, 2, 0], "order": 10}')
    code, report, _ = run(capsys, "oper", "transform", "--u", str(tmp_path / "u.json"), "--s", str(tmp_path / "s.json"))
    assert code == 0 and all(c == "0/1" for c in report["coeffs"])


def test_dims(capsys):
    code, report, _ = run(capsys, "dims", "--group", "SL", "--n", "3", "--genus", "2")
    assert code == 0
    assert report["degrees"] == [2, 3] and report["bun_dim"] == report["base_dim"] == 8
    code, _, _ = run(capsys, "dims", "--group", "GL", "--n", "2", "--genus", "1")
    assert code == 2


def test_verify_all_is_deterministic_across_jobs(capsys):
    args = ["verify-all", "--quick", "--only", "opers,liedata,bundles_p1"]
    assert run(capsys, *args)[0] == 2
    args[-1] = "opers,liedata,bundles_oracle"
    code1, report, text1 = run(capsys, *args)
    code2, _, text2 = run(capsys, *args, "--jobs", "3")
    assert code1 == code2 == 0
    assert text1 == text2
    assert list(report["summary"]) == ["bundles_oracle", "opers", "liedata"]


# -- configuration and serialisation -------------------------------------------------------------

def test_config_files(tmp_path, monkeypatch):
    monkeypatch.delenv("HITCHINLAB_PRECISION", raising=False)
    toml = tmp_path / "run.toml"
    toml.write_text("drift_tol = 1e-7\norder = 20\n")
    cfg = load_config(str(toml))
    assert cfg.drift_tol == 1e-7 and cfg.order == 20 and cfg.identity_tol == 1e-10
    js = tmp_path / "run.json"
    js.write_text(json.dumps({"jobs": 2}))
    assert load_config(str(js)).jobs == 2


def test_config_errors(tmp_path, monkeypatch):
    monkeypatch.delenv("HITCHINLAB_PRECISION", raising=False)
    bad = tmp_path / "run.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(InputError):
        load_config(str(bad))
    with pytest.raises(InputError):
        load_config(str(tmp_path / "run.yaml"))
    with pytest.raises(InputError):
        RunConfig(order=3)
    with pytest.raises(InputError):
        RunConfig(identity_tol=0)


def test_environment_overrides_precision(tmp_path, monkeypatch):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"identity_tol": 1e-9}))
    monkeypatch.setenv("HITCHINLAB_PRECISION", "1e-12")
    assert load_config(str(cfg)).identity_tol == 1e-12
    monkeypatch.setenv("HITCHINLAB_PRECISION", "tight")
    with pytest.raises(InputError):
        load_config(None)


def test_config_flag_reaches_commands(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("HITCHINLAB_PRECISION", raising=False)
    cfg = tmp_path / "run.toml"
    cfg.write_text("order = 6\n")
    code, report, _ = run(capsys, "--config", str(cfg), "oper", "schwarzian", "--series", "0,1,1")
    assert code == 0 and report["order"] == 3


def test_serialisation_formats():
    from fractions import Fraction

    assert to_jsonable({"r": Fraction(-3, 4), "z": 1 + 2j}) == {"r": "-3/4", "z": [1.0, 2.0]}
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(2.0) == "2.0"
    assert json.loads(dumps({"a": [1, 0.5], "b": {}})) == {"a": [1, 0.5], "b": {}}
