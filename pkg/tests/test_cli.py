import csv
import io
import json

import numpy as np
import pytest

from wirtinger import cli
from wirtinger.schemas import validate_config, validate_report

HOLO_SCAN = {
    "command": "scan",
    "structure": {"kind": "standard", "n": 2},
    "chart": {"components": "(u, v, u^2-v^2, 2*u*v)"},
    "grid": [[-1, 1, 21], [-1, 1, 21]],
}
VERIFY = {"command": "verify", "count": 500, "ambient_dim": [4, 6, 8], "seed": 7}


def call(config, **kw):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(config, stdout=out, stderr=err, **kw)
    return code, out.getvalue(), err.getvalue()


def test_validate_structure():
    code, out, _ = call({"command": "validate-structure", "structure": {"kind": "random", "n": 3, "seed": 4}})
    assert code == 0
    rec = json.loads(out)
    validate_report("validate-structure", rec)
    assert rec["passed"] and rec["dim"] == 6


def test_validate_structure_failing_is_reported():
    cfg = {"command": "validate-structure", "structure": {"kind": "explicit", "metric": np.eye(2).tolist(), "jop": [[0, 2], [-1, 0]]}}
    code, out, err = call(cfg)
    # explicit structures are checked on construction
    assert code == 1 and out == "" and "error" in err


def test_angle_isotropic():
    cfg = {"command": "angle", "structure": {"kind": "standard", "n": 2}, "subspace": [[1, 0, 0, 0], [0, 0, 1, 0]]}
    code, out, _ = call(cfg)
    assert code == 0
    rec = json.loads(out)
    validate_report("angle", rec)
    assert rec["cos_alpha"] == 0 and rec["classification"] == "isotropic"


def test_angle_s6():
    cfg = {"command": "angle", "structure": {"kind": "s6", "point": [0, 0, 0, 0, 0, 0, 1]},
           "subspace": [[1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, -1, 0]]}
    code, out, _ = call(cfg)
    assert code == 0
    # J e1 = -e6 at the north pole
    assert json.loads(out)["classification"] == "complex"


def test_angle_outside_support():
    cfg = {"command": "angle", "structure": {"kind": "s6", "point": [0, 0, 0, 0, 0, 0, 1]},
           "subspace": [[1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1]]}
    assert call(cfg)[0] == 1


def test_scan_holomorphic_stdout():
    code, out, err = call(HOLO_SCAN)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["u1", "u2", "cos_alpha", "alpha", "lambda_1", "classification", "grad_alpha_norm", "flags"]
    assert len(rows) == 442
    summary = json.loads(err)
    validate_report("scan", summary)
    assert summary["fractions"]["complex"] == 1.0
    assert summary["n_reported"] == 441


def test_scan_output_files(tmp_path):
    path = tmp_path / "holo.csv"
    code, out, _ = call(HOLO_SCAN, output=str(path))
    assert code == 0
    body = path.read_bytes()
    assert b"\r" not in body and body.endswith(b"\n")
    summary = json.loads((tmp_path / "holo.summary.json").read_text())
    assert summary == json.loads(out)
    validate_report("scan", summary)


def test_scan_json_rows():
    code, out, _ = call({**HOLO_SCAN, "grid": [[-1, 1, 3], [-1, 1, 3]]}, fmt="json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 9 and rows[4]["u1"] == 0


def test_scan_catalog_and_field():
    cfg = {"command": "scan", "structure": {"kind": "standard", "n": 2},
           "chart": {"catalog": "slant-plane", "params": [0.5235987755982988]}, "grid": [[0, 1, 4], [0, 1, 4]]}
    code, out, err = call(cfg)
    assert code == 0
    assert json.loads(err)["cos_alpha_max"] == pytest.approx(0.5, abs=1e-12)
    cfg = {"command": "scan", "structure": {"kind": "field", "name": "s6-orthographic"},
           "chart": {"components": ["0.1*u", "0", "0", "0", "0", "-0.1*v"]}, "grid": [[-1, 1, 5], [-1, 1, 5]]}
    code, out, err = call(cfg)
    assert code == 0
    assert json.loads(err)["n_reported"] == 25


def test_scan_central_fallback():
    cfg = {**HOLO_SCAN, "chart": {"components": "(u, v, u^2-v^2, 2*u*v)", "jacobian": "central"}}
    code, _, err = call(cfg)
    assert code == 0
    assert json.loads(err)["flag_counts"]["boundary"] == 80


def test_verify_spec_example():
    cfg = {"command": "verify", "count": 10_000, "ambient_dim": 8, "sub_dim": 4, "seed": 7}
    code, out, _ = call(cfg)
    assert code == 0
    rec = json.loads(out)
    validate_report("verify", rec)
    assert rec["worst_bound_margin"] >= -1e-9 and rec["n_violations"] == 0
    assert rec["dimension_pairs"] == [[8, 4]]


def test_verify_violation_exit(monkeypatch):
    from wirtinger import battery
    from wirtinger.angle import WirtingerCheck

    monkeypatch.setattr(battery, "verify_wirtinger", lambda s, w: WirtingerCheck(1.5, -0.5, 0.0, False, True))
    code, out, _ = call({**VERIFY, "count": 5})
    assert code == 2
    assert json.loads(out)["n_violations"] == 5


def test_nijenhuis():
    cfg = {"command": "nijenhuis", "structure": {"kind": "field", "name": "s6-orthographic"},
           "points": [[0, 0, 0, 0, 0, 0], [0.1, 0, 0.2, 0, 0, 0]], "pairs": [[0, 1], [0, 5]]}
    code, out, _ = call(cfg)
    assert code == 0
    rec = json.loads(out)
    validate_report("nijenhuis", rec)
    assert rec["rows"][0]["norm"] == pytest.approx(4, rel=1e-6)
    assert abs(rec["rows"][0]["ratio"] - 1) <= 0.05
    assert rec["rows"][1]["norm"] <= 1e-6
    code, out, _ = call(cfg, fmt="csv")
    assert out.splitlines()[0].startswith("x1,x2")


def test_nijenhuis_flat_and_vectors():
    cfg = {"command": "nijenhuis", "structure": {"kind": "field", "name": "flat", "params": [2]},
           "points": [[0.3, 0.1, -0.2, 0.4]], "vectors": [[[1, 0, 0, 0], [0, 0, 1, 1]]]}
    code, out, _ = call(cfg)
    assert code == 0 and json.loads(out)["rows"][0]["norm"] == 0


@pytest.mark.parametrize(
    "config",
    [
        {"command": "scan"},
        {"command": "angle", "structure": {"kind": "standard", "n": 2}, "subspace": [[1, 0, 0, 0]], "extra": 1},
        {"command": "nope"},
        {"command": "nijenhuis", "structure": {"kind": "standard", "n": 2}, "points": [[0, 0]]},
        {"command": "nijenhuis", "structure": {"kind": "field", "name": "flat"}, "points": [[0, 0]], "pairs": [[0, 2]]},
        {"command": "verify", "count": 3, "ambient_dim": 5},
        {"command": "angle", "structure": {"kind": "standard", "n": 2}, "subspace": [[1, 0, 0], [0, 1, 0]]},
        {**HOLO_SCAN, "chart": {"components": "(u, v, sin(u"}},
        {**HOLO_SCAN, "chart": {"components": "(u, v, w)"}},
    ],
)
def test_input_errors(config):
    code, out, err = call(config)
    assert code == 1
    assert out == "" and err


def test_parse_error_message():
    _, _, err = call({**HOLO_SCAN, "chart": {"components": ["u", "v", "sin(u", "0"]}})
    assert "6" in err


def test_all_degenerate_exit():
    cfg = {**HOLO_SCAN, "chart": {"components": "(u, 0, u, 0)"}}
    code, _, err = call(cfg)
    assert code == 3 and "numerical" in err


def test_flags_override_config(tmp_path):
    code, out, _ = call({**VERIFY, "count": 20}, seed=8)
    assert json.loads(out)["seed"] == 8


@pytest.mark.parametrize("config", [HOLO_SCAN, VERIFY])
def test_determinism(config, tmp_path):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    call(config, output=str(a))
    call(config, output=str(b))
    assert a.read_bytes() == b.read_bytes()


def test_floats_round_trip():
    code, out, _ = call({"command": "angle", "structure": {"kind": "standard", "n": 2},
                         "subspace": [[1, 0, 0, 0], [0, 0, 0.5, 0.8660254037844386]]})
    rec = json.loads(out)
    assert repr(rec["cos_alpha"]) in out or format(rec["cos_alpha"], ".17g") in out


def test_main(tmp_path, capsys):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"structure": {"kind": "standard", "n": 2}, "subspace": [[1, 0, 0, 0], [0, 1, 0, 0]]}))
    assert cli.main(["angle", "--config", str(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)["classification"] == "complex"
    assert cli.main(["scan", "--config", str(cfg)]) == 1
    assert cli.main(["angle", "--config", str(tmp_path / "missing.json")]) == 1


def test_docs_schema_in_sync():
    from pathlib import Path

    from wirtinger.schemas import CONFIG_SCHEMA

    path = Path(__file__).resolve().parents[1] / "docs" / "config.schema.json"
    assert json.loads(path.read_text()) == CONFIG_SCHEMA


def test_demo_configs_valid():
    from pathlib import Path

    configs = sorted((Path(__file__).resolve().parents[1] / "demos" / "configs").glob("*.json"))
    assert {json.loads(p.read_text())["command"] for p in configs} == set(cli.COMMANDS)
    for p in configs:
        validate_config(json.loads(p.read_text()))
