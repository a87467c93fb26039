import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from heckegrid.cli import emit, run
from heckegrid.congruence import check_tcong
from heckegrid.report import Report

SCHEMA = json.loads(resources.files("heckegrid").joinpath("report.schema.json").read_text())


def cli(*argv, tables=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err, tables)
    return code, out.getvalue(), err.getvalue()


def cli_json(*argv, tables=None):
    code, out, err = cli(*argv, "--emit", "json", tables=tables)
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return code, data


def test_basis_row(tables):
    code, data = cli_json("basis", "--group", "11", "--m", "3", "--prec", "10", tables=tables)
    assert code == 0
    assert data["valuation"] == -3 and data["prec"] == 10
    assert data["coefficients"] == [1, 0, 1, 0, 2, 2, 16, 16, 18, -46, -31, 48, -78]
    assert data["coefficients"] == tables.f_table("11", 3, 10).f(3).coefficients(-3, 10)


def test_grid_csv(tables):
    code, out, _ = cli("grid", "--group", "11", "--mmax", "5", "--nmax", "5", "--emit", "csv", tables=tables)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "m\\n,-1,0,1,2,3,4,5"
    assert len(lines) == 6
    fb = tables.f_table("11", 5, 6)
    for line, m in zip(lines[1:], range(1, 6)):
        assert line.split(",") == [str(m)] + [str(fb.a(m, n)) for n in range(-1, 6)]


def test_b_grid_json(tables):
    code, data = cli_json("grid", "--group", "11", "--kind", "b", "--mmax", "4", "--nmax", "3", tables=tables)
    assert code == 0 and data["n"] == [-1, 0, 1, 2, 3] and data["m"] == [1, 2, 3, 4]
    assert data["values"][0][2] == -1


def test_cusp_and_faber(tables):
    code, data = cli_json("cusp", "--group", "11", "--n", "-1", "--prec", "8", tables=tables)
    assert code == 0 and data["coefficients"] == [1, -2, -1, 2, 1, 2, -2]
    code, data = cli_json("faber", "--group", "2", "--n", "1", "--prec", "3", tables=tables)
    assert data["coefficients"] == [1, 0, 276, -2048]
    code, _, err = cli("faber", "--group", "11", "--n", "1", tables=tables)
    assert code == 2 and "genus 0" in err


def test_tcong_exit_zero(tables):
    code, data = cli_json("congruence", "--group", "11", "--variant", "tcong", "--m", "8", "--p", "19",
                          "--r", "1", "--nmax", "20", tables=tables)
    assert code == 0
    chk = data["checks"][0]
    fb = tables.f_table("11", 152, 21)
    lib = check_tcong(fb, 8, 19, 1, range(1, 21)).to_check().to_dict()
    assert chk == json.loads(json.dumps(lib))


def test_probe_exit_one(tables):
    code, data = cli_json("congruence", "--group", "11", "--variant", "P8.1", "--m", "2", "--p", "3",
                          "--r", "2", "--nmax", "40", "--probe", tables=tables)
    assert code == 1 and not data["checks"][0]["passed"]


def test_replicate_mock(tables):
    code, out, err = cli("replicate", "--group", "22+2", "--element", "f:2", "--m", "2", tables=tables)
    assert code == 2
    assert "d1 = -2" in out and "mock" in err
    code, data = cli_json("replicate", "--group", "22+2", "--element", "f:2", "--m", "2", tables=tables)
    assert code == 2 and data == {"verdict": "mock", "group": "11", "stage": 2, "residuals": {"d1": -2}}


def test_replicate_holomorphic(tables):
    code, data = cli_json("replicate", "--group", "22", "--element", "f:3", "--m", "11", "--prec", "6",
                          tables=tables)
    assert code == 0 and data["verdict"] == "holomorphic" and data["group"] == "2"
    assert data["coefficients"][4:] == [33882, -1845248, 43446018, -648265728, 7171488865]


def test_hecke_decomposition(tables):
    code, data = cli_json("hecke", "--group", "11", "--element", "f:11", "--op", "T(11)", "--prec", "10",
                          tables=tables)
    assert code == 0
    assert data["f_basis_part"] == "-1*f_11 + 1*f_121"
    assert data["remainder"].startswith("11*q^-1 + 2165724*q")
    code, data = cli_json("hecke", "--group", "2", "--element", "J:1", "--op", "T(6)", "--prec", "10",
                          tables=tables)
    assert data["coefficients"] == tables.f_table("2", 6, 10).f(6).coefficients(-6, 10)


def test_verify_commands(tables):
    for ident in ("duality", "genfun", "genj", "theta"):
        code, data = cli_json("verify", "--group", "11", "--identity", ident, "--mmax", "8", "--nmax", "8",
                              tables=tables)
        assert code == 0 and all(c["passed"] for c in data["checks"]), ident


def test_catalog_commands(tables):
    code, data = cli_json("catalog", "list", tables=tables)
    assert code == 0 and [c["params"]["group"] for c in data["checks"]][:3] == ["1", "2", "2+"]
    code, data = cli_json("catalog", "validate", "--group", "11", tables=tables)
    assert code == 0 and data["checks"]


@pytest.mark.parametrize("argv", [
    ["basis", "--group", "37", "--m", "3"],
    ["basis", "--group", "11", "--m", "-3"],
    ["hecke", "--group", "11", "--element", "f:2", "--op", "T(0)"],
    ["hecke", "--group", "11", "--element", "g:2", "--op", "T(2)"],
    ["congruence", "--group", "11", "--variant", "tcong", "--m", "6", "--p", "3"],
    ["basis", "--group", "22", "--m", "3", "--prec", "5000"],
    ["nonsense"],
])
def test_usage_errors(argv, tables):
    code, _, _ = cli(*argv, tables=tables)
    assert code == 2


def test_precision_shortfall_is_named(tables):
    code, _, err = cli("basis", "--group", "22", "--m", "3", "--prec", "5000", tables=tables)
    assert code == 2 and "need" in err


def test_byte_identical(tables):
    argv = ["grid", "--group", "22", "--mmax", "6", "--nmax", "6", "--emit", "json"]
    assert cli(*argv, tables=tables) == cli(*argv)


def test_empty_report():
    assert emit(Report(), "json") == '{"checks":[]}\n'
    jsonschema.validate(json.loads(emit(Report(), "json")), SCHEMA)


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "heckegrid", "basis", "--group", "1", "--m", "1", "--prec", "3"],
                       capture_output=True, text=True)
    assert p.returncode == 0
    assert "196884" in p.stdout and "21493760" in p.stdout
