import io
import json

import pytest

from pseudocurv import catalog as cat
from pseudocurv import suite
from pseudocurv.cli import chart_from_spec, dump_spec, load_spec, main

HALF_PI = "1.570796326795"


def _toml(text):
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    return tomllib.loads(text)


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json", "-")
    return code, json.loads(text)


def test_inspect_reissner_nordstrom():
    code, doc = run_json("inspect", "--family", "reissner_nordstrom", "--param", "m=1", "--param", "q=1",
                         "--point", f"t=0,r=2,theta={HALF_PI},phi=0")
    assert code == 0 and doc["schema_version"] == "1"
    p = doc["points"][0]
    assert p["invariants"]["rho"] == pytest.approx(0.25)
    assert p["invariants"]["phi"] == pytest.approx(1 / 96)
    assert p["invariants"]["tau1"] == pytest.approx(0.0625)
    assert p["classification"]["roter"]["holds"]
    assert p["classification"]["two_quasi_einstein"]
    assert all(c["residual"] >= 0 for c in p["conditions"])


def test_inspect_minkowski_is_flat():
    code, doc = run_json("inspect", "--family", "minkowski", "--point", "t=0,x=1,y=2,z=3")
    p = doc["points"][0]
    assert code == 0 and p["classification"]["summary"] == ["flat"]
    assert p["invariants"]["norm_R"] == 0.0


def test_inspect_jnw_is_ricci_simple():
    code, doc = run_json("inspect", "--family", "jnw", "--param", "b=1", "--param", "s=0.5",
                         "--point", f"t=0,r=2,theta={HALF_PI},phi=0")
    c = doc["points"][0]["classification"]
    assert code == 0 and c["ricci_simple"]
    # library sign convention; the opposite curvature sign gives -0.0662913
    assert c["partially_einstein"]["lambda"] == pytest.approx(0.0662912607, rel=1e-8)


def test_human_report_mentions_verdicts():
    code, text = run("inspect", "--family", "reissner_nordstrom", "--point", "t=0,r=3")
    assert code == 0 and "Roter" in text


def test_json_is_byte_identical_across_runs():
    argv = ("inspect", "--family", "morris_thorne", "--point", "t=0,r=2", "--point", "t=0,r=3", "--json", "-")
    assert run(*argv) == run(*argv)


def test_sweep_schwarzschild_phi_vanishes():
    code, doc = run_json("sweep", "--family", "schwarzschild", "--param", "m=1", "--from", "3", "--to", "10", "--steps", "8")
    assert code == 0 and len(doc["rows"]) == 8
    assert all(abs(r["phi"]) < 1e-12 and not r["flags"] for r in doc["rows"])


def test_sweep_reissner_nordstrom_marks_bad_row_and_flags_rho():
    code, doc = run_json("sweep", "--family", "reissner_nordstrom", "--param", "m=1", "--param", "q=1",
                         "--from", "0.6", "--to", "1.6", "--steps", "6")
    assert code == 0
    errs = [r for r in doc["rows"] if r.get("error")]
    assert len(errs) == 1 and errs[0]["r"] == pytest.approx(1.0)
    assert any("rho changes sign" in r["flags"] for r in doc["rows"])


def test_sweep_conformally_flat_warped_family(tmp_path):
    spec = tmp_path / "h.toml"
    spec.write_text(
        '[manifold]\ndimension = 4\ncoordinates = ["t", "r", "theta", "phi"]\n'
        '[warped]\nbase_coordinates = ["t", "r"]\nbase_metric = [["-h", "0"], ["0", "1/h"]]\n'
        'warping = "r^2"\nfiber_dim = 2\nfiber_scalar_curvature = 2\n'
        '[params]\nC1 = 0.3\nC2 = 0.2\n'.replace('"-h"', '"-(C1*r + C2*r^2 + 1)"').replace('"1/h"', '"1/(C1*r + C2*r^2 + 1)"'))
    code, doc = run_json("sweep", "--metric", str(spec), "--point", "t=0", "--from", "1", "--to", "4", "--steps", "5")
    assert code == 0 and all(abs(r["rho"]) < 1e-10 for r in doc["rows"])


def test_dump_spec_round_trip(tmp_path):
    for fid in cat.family_ids():
        code, text = run("inspect", "--family", fid, "--dump-spec")
        assert code == 0
        path = tmp_path / f"{fid}.toml"
        path.write_text(text)
        assert load_spec(path) == cat.build(fid).chart, fid


def test_exit_codes(tmp_path):
    assert run("inspect", "--family", "kerr", "--point", "r=1")[0] == 3
    assert run("inspect", "--family", "schwarzschild", "--point", "t=0,r=1.5")[0] == 2
    assert run("inspect")[0] == 3
    bad = tmp_path / "bad.toml"
    bad.write_text('[manifold]\ndimension = 2\ncoordinates = ["x", "y"]\n[metric]\ng = [["1", "0"], ["0", "x +* y"]]\n')
    assert run("inspect", "--metric", str(bad), "--point", "x=1,y=1")[0] == 3


def test_positioned_spec_diagnostic(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text('[manifold]\ndimension = 2\ncoordinates = ["x", "y"]\n[metric]\ng = [["1", "0"], ["0", "x $ y"]]\n')
    assert run("inspect", "--metric", str(bad), "--point", "x=1,y=1")[0] == 3
    err = capsys.readouterr().err
    assert "x $ y" in err and "  ^" in err


def test_spec_validation():
    with pytest.raises(ValueError, match="exactly one"):
        chart_from_spec({"manifold": {"dimension": 2, "coordinates": ["x", "y"]}})
    with pytest.raises(ValueError):
        chart_from_spec({"manifold": {"dimension": 3, "coordinates": ["x", "y"]},
                         "metric": {"g": [["1", "0"], ["0", "1"]]}})


def test_dump_spec_of_general_chart_reparses():
    chart = chart_from_spec({"manifold": {"dimension": 2, "coordinates": ["x", "y"]},
                             "metric": {"g": [["1", "0"], ["0", "a*sin(x)^2"]]}, "params": {"a": 2.0}})
    assert chart_from_spec(_toml(dump_spec(chart))) == chart


def test_suite_filter_lemma32():
    code, doc = run_json("paper-suite", "--filter", "lemma32")
    assert code == 0 and [c["name"] for c in doc["checks"]] == ["lemma32"]


def test_suite_filter_selection():
    assert [c.name for c in suite.select("theorem61")] == ["theorem61"]
    assert {c.name for c in suite.select("lemma3*")} == {"lemma31", "lemma32"}
    assert len(suite.select(None)) == len(suite.CHECKS)
