import json

import pytest

from mslab.experiments import CATALOG, Param, catalog, resolve_params, run
from mslab.reporting import report_json, table_csv, table_svg, verdict_lines, write_report


def test_catalog_is_complete_and_ordered():
    names = [e.name for e in catalog()]
    assert names == sorted(names)
    assert {"quarter-shift", "carleson-delta", "density", "scarl", "khinchin"} <= set(names)
    assert len(names) == 13
    assert names == [e.name for e in catalog()]


def test_every_entry_has_anchor_and_schema():
    for exp in catalog():
        assert exp.anchor and exp.summary
        for prm in exp.params.values():
            assert prm.kind in ("float", "int", "str", "floats", "ints")
            prm.check(prm.default)


def test_param_parsing_and_type_checks():
    assert Param("ints", [1]).parse("16,32") == [16, 32]
    assert Param("float", 1.0).parse("2.5") == 2.5
    with pytest.raises(TypeError):
        Param("int", 1).check(1.5)
    with pytest.raises(TypeError):
        Param("float", 1.0).check(True)
    exp = CATALOG["carleson-delta"]
    assert resolve_params(exp, {"n": "7"})["n"] == 7
    with pytest.raises(KeyError):
        resolve_params(exp, {"bogus": 1})


def test_unknown_experiment():
    with pytest.raises(KeyError):
        run("nope")


def test_carleson_delta_report(golden):
    ref = {r["n"]: r["delta"] for r in golden("blaschke_delta.csv")}
    rep = run("carleson-delta")
    assert rep["tables"][0]["rows"][-1][1] == pytest.approx(ref[20], rel=1e-10)
    assert all(v["passed"] for v in rep["verdicts"])
    assert set(rep) == {"experiment", "params", "seed", "tables", "verdicts", "versions"}


def test_radial_sequence_fails_separation():
    rep = run("carleson-delta", {"sequence": "radial", "n": 50})
    assert not rep["verdicts"][0]["passed"]


def test_density_report():
    rep = run("density")
    assert rep["verdicts"][0]["passed"]


def test_seeded_experiment_depends_on_seed():
    a = run("pp-check", {"a": [0.5]}, seed=1)
    b = run("pp-check", {"a": [0.5]}, seed=2)
    assert a["tables"] != b["tables"]
    assert report_json(a) == report_json(run("pp-check", {"a": [0.5]}, seed=1))


def test_reporting_outputs(tmp_path):
    rep = run("quarter-shift", {"N": [16, 32, 64]})
    paths = write_report(rep, tmp_path, ("csv", "json", "svg"))
    names = sorted(p.name for p in paths)
    assert names == ["quarter-shift.json", "quarter-shift__gram.csv", "quarter-shift__gram.svg"]
    data = json.loads((tmp_path / "quarter-shift.json").read_text())
    assert data["params"]["N"] == [16, 32, 64]
    header = (tmp_path / "quarter-shift__gram.csv").read_text().splitlines()[0]
    assert header == "tau_mult,N,lambda_min,lambda_max,inv_diag_max"
    assert table_svg(rep["tables"][0]).startswith("<svg")
    assert not list(tmp_path.glob(".*"))  # no leftover temp files


def test_csv_uses_17_significant_digits():
    text = table_csv({"columns": ["x"], "rows": [[0.1]]})
    assert text == "x\n0.10000000000000001\n"


def test_json_handles_non_finite():
    rep = {"experiment": "x", "tables": [], "verdicts": [], "v": float("inf")}
    assert '"inf"' in report_json(rep)


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        write_report(run("carleson-delta", {"n": 3}), tmp_path, ("xml",))


def test_verdict_lines_are_parseable():
    for line in verdict_lines(run("carleson-delta", {"n": 3})):
        status, rest = line.split(" ", 1)
        assert status in ("PASS", "FAIL") and rest.startswith("carleson-delta: ")
