import csv
import io
import json
from pathlib import Path

import pytest

from okounkov.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def sample(name):
    return str(SAMPLES / f"{name}.json")


def test_unknown_command_prints_usage():
    code, _, err = run("frobnicate")
    assert code == 64
    assert "usage:" in err


def test_missing_input_is_validation_error():
    code, _, err = run("hull")
    assert code == 2
    assert json.loads(err)["reason"] == "missing-option"


def test_unreadable_input(tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    code, _, err = run("hull", "-i", str(bad))
    assert code == 2 and json.loads(err)["reason"] == "bad-json"


def test_density_with_zero_m_max():
    code, _, err = run("semigroup-density", "-i", sample("curve_semigroup"), "--m-max", "0")
    assert code == 2
    assert json.loads(err)["exit"] == 2


def test_non_big_divisor_exits_3():
    code, _, err = run("toric-body", "-i", sample("p2_zero"))
    assert code == 3
    assert json.loads(err)["reason"] == "not-big"


def test_singular_fan_rejected(tmp_path):
    doc = json.loads((SAMPLES / "bad_fan.json").read_text())
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"fan": doc, "divisor": [0, 0, 1], "chart": [1, 2]}))
    code, _, err = run("toric-body", "-i", str(path))
    assert code == 2 and json.loads(err)["reason"] == "singular-fan"


def test_hull_output():
    code, out, _ = run("hull", "-i", sample("trapezoid_points"))
    assert code == 0
    res = json.loads(out)
    assert res["polytope"]["vertices"] == [["0", "0"], ["1", "1"], ["3", "1"], ["4", "0"]]
    assert res["lattice_points"] == 8


def test_toric_body_svg_is_unit_simplex():
    code, out, _ = run("toric-body", "-i", sample("p2_hyperplane"), "--format", "svg")
    assert code == 0
    assert out.startswith("<svg") and "<polygon" in out
    code, out, _ = run("toric-body", "-i", sample("p2_hyperplane"), "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "y", "x_approx", "y_approx"]
    assert sorted(tuple(r[:2]) for r in rows[1:]) == [("0", "0"), ("0", "1"), ("1", "0")]


def test_surface_body_writes_sidecars(tmp_path):
    target = tmp_path / "abelian.json"
    code, _, _ = run("surface-body", "-i", sample("abelian_body"), "-o", str(target))
    assert code == 0
    res = json.loads(target.read_text())
    assert res["vertices"] == [["0", "0"], ["1", "0"], ["1", "3"], ["0", "5"]]
    rows = list(csv.reader((tmp_path / "abelian.csv").open()))
    assert [r[:2] for r in rows[1:]] == [["0", "0"], ["1", "0"], ["1", "3"], ["0", "5"]]
    assert (tmp_path / "abelian.svg").read_text().startswith("<svg")


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("surface-body", "-i", sample("figure4_body"), "-o", str(a))
    run("surface-body", "-i", sample("figure4_body"), "-o", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize(
    "argv,key,value",
    [
        (("semigroup-fujita", "-i", "curve_semigroup", "--p", "20", "--k", "50"), "gap", ["1", "10"]),
        (("semigroup-fujita", "-i", "curve_semigroup", "--p", "20", "--k", "50"), "gap_at_k", ["99", "1000"]),
        (("semigroup-translate", "-i", "numerical_semigroup"), "z", [8, 0]),
        (("monomial-mult", "-i", "ideal"), "multiplicity", "5"),
        (("monomial-body", "-i", "rectangle_body", "--m-max", "6"), "equals_reference", True),
        (("toric-count", "-i", "hirzebruch1", "--m-max", "3"), "ehrhart_polynomial", ["1", "4", "4"]),
        (("surface-zariski", "-i", "blowup_body"), "positive", ["1", "0"]),
        (("surface-slice", "-i", "abelian_body", "--t", "1/2"), "ok", True),
        (("surface-derivative", "-i", "figure4_body"), "right", "8"),
    ],
)
def test_command_results(argv, key, value):
    argv = list(argv)
    argv[2] = sample(argv[2])
    code, out, _ = run(*argv)
    assert code == 0
    assert json.loads(out)[key] == value


def test_cutkosky_second_difference_is_symbolic():
    code, out, _ = run("cutkosky", "-i", sample("cutkosky"))
    assert code == 0
    res = json.loads(out)
    assert len(res["samples"]) == 3
    (d2,) = res["second_differences"]
    # two different radicands, so not a single quadratic irrational
    assert d2["kind"] == "surd" and d2["approx_is_exact"] is False
    assert float(d2["approx"]) < 0


def test_bad_rational_option():
    code, _, _ = run("surface-slice", "-i", sample("abelian_body"), "--t", "half")
    assert code == 2


@pytest.mark.parametrize(
    "name,schema,ok",
    [
        ("abelian_body", "surface", True),
        ("bad_fan", "fan", False),
        ("bad_slices", "semigroup", False),
        ("curve_semigroup", "semigroup", True),
    ],
)
def test_validate(name, schema, ok):
    code, out, _ = run("validate", "-i", sample(name), "--schema", schema)
    assert code == 0
    rep = json.loads(out)
    assert rep["ok"] is ok
    if not ok:
        assert any(not c["ok"] for c in rep["checks"])


def test_validate_reports_signature():
    code, out, _ = run("validate", "-i", sample("abelian_body"), "--schema", "surface")
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    assert checks["signature"]["ok"]


def test_gallery(tmp_path):
    code, out, _ = run("gallery", "-o", str(tmp_path / "g"))
    assert code == 0
    summary = json.loads(out)
    assert summary["trapezoid"]["vertices"] == 4
    assert summary["figure4"]["alpha_nonzero"]
    assert summary["figure4"]["beta_breakpoints"]
    assert summary["mu_curve"]["samples"] == 50
    assert summary["mu_curve"]["nonzero_second_differences"] > 0
    lines = (tmp_path / "g" / "trapezoid.csv").read_text().strip().splitlines()
    assert len(lines) == 5
    assert len((tmp_path / "g" / "mu_curve.csv").read_text().strip().splitlines()) == 51
