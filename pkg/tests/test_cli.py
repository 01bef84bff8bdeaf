import csv
import math
import io
import json

import pytest

from asymchar.cache import ENV_VAR
from asymchar.cli import dispatch


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "cache"))


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_info():
    code, out, _ = run("info", "--type", "E", "--rank", "8")
    doc = json.loads(out)
    assert code == 0
    assert doc["results"]["dim"] == 248 and doc["results"]["weyl_order"] == 696729600
    assert set(doc) == {"config", "results", "provenance"}


def test_invalid_input_exit_code():
    assert run("info", "--type", "Q", "--rank", "2")[0] == 2
    code, _, err = run("xeval", "--type", "A", "--rank", "2", "--lambda", "1", "--x", "1,0")
    assert code == 2 and "coordinates" in err
    assert run("mittag", "--type", "G", "--rank", "2", "--k", "1", "--xi", "3")[0] == 2


def test_deterministic_output():
    args = ("cmin", "--type", "A", "--rank", "2", "--lambda", "1,1", "--starts", "8", "--no-cache")
    assert run(*args)[1] == run(*args)[1]


def test_cache_is_transparent(tmp_path):
    args = ("mittag", "--type", "A", "--rank", "2", "--k", "2", "--xi", "1")
    fresh = run(*args, "--no-cache")[1]
    first = run(*args)[1]
    second = run(*args)[1]
    assert fresh == first == second
    assert json.loads(first)["results"] == {"0,1": "77/324", "1,2": "1/324", "2,0": "13/324"}


def test_corrupted_cache_reports(tmp_path):
    args = ("mu", "--type", "G", "--rank", "2")
    assert run(*args)[0] == 0
    for f in (tmp_path / "cache").glob("*.json"):
        f.write_text(f.read_text().replace('"mu":4', '"mu":5'))
    code, _, err = run(*args)
    assert code == 2 and "corrupt" in err


def test_xeval_ray_csv():
    code, out, _ = run("xeval", "--type", "C", "--rank", "2", "--lambda", "1,0", "--x", "1,0", "--t-max", "10", "--samples", "5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["t", "re", "im"] and len(rows) == 6


def test_mittag_csv_and_lattice():
    code, out, _ = run("mittag", "--type", "A", "--rank", "1", "--k", "2", "--xi", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["mu", "coefficient"], ["1", "1/2"]]
    code, out, _ = run("mittag", "--type", "A", "--rank", "2", "--k", "2", "--x", "0.3,0.45")
    res = json.loads(out)["results"]
    diff = abs(complex(res["lattice_sum"]["value"]["re"], res["lattice_sum"]["value"]["im"]) - complex(res["trigonometric_polynomial"]["re"], res["trigonometric_polynomial"]["im"]))
    assert diff <= res["lattice_sum"]["tail_bound"]


def test_decay_csv():
    code, out, _ = run("decay", "--type", "A", "--rank", "2", "--lambda", "1,0", "--x", "1,0", "--format", "csv", "--samples", "50")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["t", "envelope"] and len(rows) == 51


def test_cartesian_basis():
    code, out, _ = run("xeval", "--type", "C", "--rank", "2", "--basis", "cartesian", "--lambda", "1,0", "--x", "8.2517,0")
    assert code == 0
    # lambda = e_1 = omega_1 and x = t e_1 = t omega_1^vee, where X = 6 (t - sin t) / t^3
    t = 8.2517
    assert json.loads(out)["results"]["X"]["re"] == pytest.approx(6 * (t - math.sin(t)) / t**3, rel=1e-9)


def test_bounds_and_dh():
    code, out, _ = run("bounds", "--type", "A", "--rank", "1")
    res = json.loads(out)["results"]
    assert code == 0 and "C(G)" in res and res["sln_upper"]["value"] == 1.0
    code, out, _ = run("dh", "--type", "A", "--rank", "2")
    res = json.loads(out)["results"]
    assert res["second_moment"] == pytest.approx(0.25)
    assert run("dh", "--type", "A", "--rank", "2", "--format", "table")[1].startswith("B_rho")


def test_cg_a1():
    code, out, _ = run("cg", "--type", "A", "--rank", "1")
    assert json.loads(out)["results"]["c"] == pytest.approx(0.2172336282, abs=1e-8)
