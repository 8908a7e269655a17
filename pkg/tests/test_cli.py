import csv
import io
import json

import pytest
from click.testing import CliRunner

from clusterfuse import closed_forms as cf
from clusterfuse.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def rows_of(result):
    assert result.exit_code == 0, result.output
    return list(csv.DictReader(io.StringIO(result.output)))


def test_version():
    r = run("--version")
    assert r.exit_code == 0
    assert "0.1.0" in r.output


def test_scenario_single_row():
    rows = rows_of(run("scenario", "--name", "method1-all-success", "--p1", "0", "--p2", "0.1"))
    assert len(rows) == 1
    row = rows[0]
    assert float(row["fidelity_sim"]) == pytest.approx(cf.f33(0, 0.1), abs=1e-11)
    assert float(row["fidelity_formula"]) == pytest.approx(cf.f33(0, 0.1), abs=1e-11)


def test_scenario_camel_case_and_corrected_column():
    rows = rows_of(
        run("scenario", "--name", "Method1FailFail", "--p1", "0", "--p2", ".2", "--p3", ".2",
            "--p4", ".2", "--p-wait", ".2")
    )
    row = rows[0]
    assert float(row["fidelity_sim"]) == pytest.approx(float(row["fidelity_formula_corrected"]), abs=1e-11)


def test_sweep_row_count():
    r = run("sweep", "--p-min", "0", "--p-max", "1", "--steps", "11", "--quantities", "eq2:q=5")
    rows = rows_of(r)
    assert len(rows) == 11
    assert r.output.splitlines()[0] == "p,eq2:q=5"
    assert float(rows[3]["eq2:q=5"]) == pytest.approx(cf.chain_fidelity(5, 0.3), abs=1e-11)


def test_sweep_multiple_quantities():
    rows = rows_of(run("sweep", "--steps", "3", "--quantities", "eq2:q=3;chain-fidelity:q=3"))
    for row in rows:
        assert float(row["eq2:q=3"]) == pytest.approx(float(row["chain-fidelity:q=3"]), abs=1e-11)


def test_twelve_significant_digits():
    rows = rows_of(run("sweep", "--steps", "4", "--quantities", "rho2-fidelity"))
    digits = rows[1]["rho2-fidelity"].replace("0.", "", 1).lstrip("0")
    assert len(digits) <= 12


def test_mc_is_reproducible(tmp_path):
    args = ["mc", "--method", "1", "--recycle", "--samples", "2000", "--seed", "42"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*args, "--out", str(a)).exit_code == 0
    assert run(*args, "--out", str(b)).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_mc_json_metadata():
    r = run("mc", "--samples", "500", "--seed", "3", "--format", "json")
    assert r.exit_code == 0, r.output
    doc = json.loads(r.output)
    assert doc["metadata"]["seed"] == 3
    assert doc["metadata"]["tool"] == "clusterfuse"
    (row,) = doc["rows"]
    assert row["samples"] == 500
    assert sum(row["fidelity_histogram"]) == row["successes"]


def test_fig1_columns():
    rows = rows_of(run("figure", "fig1", "--steps", "3"))
    assert list(rows[0])[0] == "p"
    for q in range(2, 8):
        assert f"F{q}_sim" in rows[0]
        assert f"F{q}_formula" in rows[0]


def test_fig2_has_seven_curves():
    rows = rows_of(run("figure", "fig2", "--steps", "2"))
    assert len([k for k in rows[0] if k.endswith("_sim")]) == 7


def test_fig4_left_at_zero():
    rows = rows_of(run("figure", "fig4-left", "--p-min", "0", "--p-max", "0", "--steps", "1"))
    (row,) = rows
    for k, v in row.items():
        if k != "p":
            assert float(v) == pytest.approx(1.0, abs=1e-11), k


@pytest.mark.parametrize("binding", ["equal", "fresh-primitives"])
def test_compare_methods(binding):
    rows = rows_of(run("compare-methods", "--binding", binding, "--steps", "3"))
    assert len(rows) == 3


class TestExitCodes:
    def test_unknown_figure(self):
        assert run("figure", "fig9").exit_code == 2

    def test_unknown_flag(self):
        assert run("scenario", "--name", "method1-wait", "--p9", "0").exit_code == 2

    def test_unknown_scenario(self):
        assert run("scenario", "--name", "method3").exit_code == 2

    def test_strength_out_of_range(self):
        assert run("scenario", "--name", "method1-all-success", "--p1", "0", "--p2", "1.5").exit_code == 1

    def test_missing_strength(self):
        assert run("scenario", "--name", "method1-wait", "--p1", "0").exit_code == 1

    def test_bad_grid(self):
        assert run("sweep", "--p-min", "0.8", "--p-max", "0.2", "--quantities", "eq2:q=3").exit_code == 1

    def test_unknown_quantity(self):
        assert run("sweep", "--quantities", "bogus").exit_code == 1

    def test_unwritable_output(self, tmp_path):
        r = run("sweep", "--quantities", "eq2:q=3", "--out", str(tmp_path / "no" / "such" / "file.csv"))
        assert r.exit_code == 1
