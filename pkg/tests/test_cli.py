import io
import json
import subprocess
import sys

import pytest

from liesym.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    return code, json.loads(out)


# -- the four exit codes --------------------------------------------------------------


def test_exit_0_table_one():
    code, rep = call_json("tables", "verify", "--table", "1")
    assert code == 0
    assert len(rep["results"]) == 8
    assert all(r["verdict"] == "Zero" for r in rep["results"])
    assert all(len(r["details"]["parts"]) == 2 for r in rep["results"])


def test_exit_1_wrong_potential():
    code, rep = call_json("check-kg", "--model", "euclid2", "--vector", "dilation",
                          "--potential", "x^(-1)*f(y/x)", "--instantiate", "f=s^2")
    assert code == 1
    assert rep["verdict"] == "NonZero"
    assert "witness" in rep["results"][0]["residuals"][0]


def test_exit_2_missing_instantiation():
    code, out, err = call("check-kg", "--model", "euclid2", "--vector", "dilation",
                          "--potential", "x^(-2)*f(y/x)")
    assert code == 2
    assert "no instantiation" in err


def test_exit_3_inconclusive(tmp_path):
    # the residual vanishes wherever it is defined, but half the box has x < 1
    code, rep = call_json("check-kg", "--model", "euclid2", "--vector", "translation_x",
                          "--potential", "sqrt(x - 1)*(sin(y)^2 + cos(y)^2 - 1)")
    assert code == 3
    assert rep["verdict"] == "Inconclusive"


@pytest.mark.parametrize("argv", [
    ["classify", "--model", "nowhere", "--vector", "x"],
    ["classify", "--model", "euclid2", "--vector", "nope"],
    ["check-kg", "--model", "euclid2", "--vector", "dilation", "--potential", "x +"],
    ["drift", "--scenario", "no.such"],
    ["catalog", "export", "metric.nowhere"],
    ["classify", "--model", "euclid2", "--vector", "rotation", "--trials", "0"],
    ["tables", "verify", "--row", "row99"],
    ["frobnicate"],
])
def test_input_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_error_report_in_json():
    code, out, _ = call("classify", "--model", "nowhere", "--vector", "x", "--json")
    rep = json.loads(out)
    assert code == 2 and rep["exit_code"] == 2 and rep["schema_version"] == 1
    assert rep["error_type"] == "ModelError"


# -- individual commands ----------------------------------------------------------------


def test_classify_x2():
    code, rep = call_json("classify", "--model", "minisuperspace", "--vector", "X2")
    assert code == 0
    assert rep["results"][0]["class"] == "properCKV"


def test_classify_expect_mismatch():
    code, _, _ = call("classify", "--model", "minisuperspace", "--vector", "X2", "--expect", "KV")
    assert code == 1


def test_table_two_skips_flagged_row():
    code, rep = call_json("tables", "verify", "--table", "2")
    verdicts = {r["row"]: r["verdict"] for r in rep["results"]}
    assert verdicts.pop("table2.row5") == "Skipped"
    assert set(verdicts.values()) == {"Zero"}
    assert code == 0


def test_single_row_and_printed_variant():
    code, rep = call_json("tables", "verify", "--table", "1", "--row", "8", "--printed")
    (r,) = rep["results"]
    assert r["printed"]["verdict"] == "NonZero"
    assert code == 0


def test_check_noether_x2_fails_on_base():
    code, _, _ = call("check-noether", "--model", "minisuperspace", "--eta", "X2")
    assert code == 1


def test_check_noether_time_translation():
    code, _, _ = call("check-noether", "--model", "minisuperspace", "--xi", "1")
    assert code == 0


def test_curvature_schwarzschild():
    code, rep = call_json("curvature", "--model", "schwarzschild")
    assert code == 0
    assert len(rep["results"][0]["ricci"]) == 10


def test_curvature_sphere_not_flat():
    assert call("curvature", "--model", "s3")[0] == 1


def test_conformal_emits_lagrangian():
    code, rep = call_json("conformal", "--model", "minisuperspace", "--factor", "sqrt(a)",
                          "--emit-lagrangian")
    assert code == 0
    lag = [r for r in rep["results"] if r["check"] == "conformal_lagrangian"][0]
    assert lag["lagrangian"]["time"] == "t"


def test_discover_kv():
    code, rep = call_json("discover-kv", "--model", "euclid3", "--degree", "1")
    assert code == 0 and rep["results"][0]["dimension"] == 6


def test_check_schrodinger_and_yamabe():
    assert call("check-schrodinger", "--model", "euclid2", "--vector", "translation_x",
                "--potential", "x", "--a0", "-1")[0] == 0
    assert call("check-yamabe", "--model", "s3", "--vector", "rotation_xy")[0] == 0


def test_verify_solution_short_name():
    code, rep = call_json("verify-solution", "--scenario", "solution.bessel_h", "--points", "10")
    assert code == 0 and rep["results"][0]["pass"]


def test_catalog_export_then_check_file(tmp_path):
    path = tmp_path / "model.json"
    code, _, _ = call("catalog", "export", "metric.minisuperspace.sc01a", "-o", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    doc["vector_fields"]["mine"] = {"a": "a", "b": "-b"}
    path.write_text(json.dumps(doc))
    code, rep = call_json("classify", "--model", str(path), "--vector", "mine")
    assert code == 0


def test_bad_model_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"chart": ["x"], "metric": [["1", "2"]]}')
    code, _, err = call("curvature", "--model", str(path))
    assert code == 2 and "metric" in err


# -- reports ---------------------------------------------------------------------------------


def test_json_is_deterministic():
    argv = ("tables", "verify", "--table", "2", "--json", "--no-timings", "--seed", "17")
    a, b = call(*argv), call(*argv)
    assert a == b
    assert "timings" not in json.loads(a[1])


def test_seed_changes_witness():
    base = ("check-kg", "--model", "euclid2", "--vector", "rotation", "--potential", "x",
            "--json", "--no-timings")
    w1 = json.loads(call(*base, "--seed", "1")[1])["results"][0]["residuals"][0]["witness"]
    w2 = json.loads(call(*base, "--seed", "2")[1])["results"][0]["residuals"][0]["witness"]
    assert w1 != w2


def test_human_output_renders_report():
    code, out, _ = call("classify", "--model", "euclid2", "--vector", "dilation")
    assert "HV" in out and out.rstrip().endswith("(exit 0)")
    code, out, _ = call("classify", "--model", "euclid2", "--vector", "dilation", "--quiet")
    assert out.count("\n") == 1


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "liesym", "catalog", "list", "metric", "--quiet"],
                       capture_output=True, text=True)
    assert p.returncode == 0
