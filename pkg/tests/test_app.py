import json
import textwrap

import numpy as np
import pandas as pd
import pytest

import app
from factor_check import CheckReport, CheckResult, Verdict


def write_scenario(tmp_path, body, name="scenario.toml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(body).lstrip(), encoding="utf-8")
    return path


def check(path, out, *flags):
    return app.main(["check", str(path), "--out", str(out), *flags])


TORUS = """
    model = "torus"
    n = 2
    K = 3
    ell_range = [0, 1]
"""


def test_sphere_scan_passes_exactly_at_k_and_k_minus_one(tmp_path, capsys):
    path = write_scenario(
        tmp_path,
        """
        model = "sphere"
        k_lift = 0
        N = 64
        K = 4
        margin = 0.1
        checks = ["full"]
        ell_range = [-2, 2]
        """,
    )
    out = tmp_path / "out"
    assert check(path, out) == app.EXIT_CONCLUSIVE
    scan = pd.read_csv(out / "scan.csv", index_col=0)
    assert dict(zip(scan["ell"], scan["factorises"], strict=True)) == {
        -2: "fail",
        -1: "pass",
        0: "pass",
        1: "fail",
        2: "fail",
    }
    assert (scan["factorises"] == scan["predicted"]).all()
    assert list(scan["branch"]) == ["even", "odd", "even", "odd", "even"]
    assert (out / "sectors.csv").exists()
    assert (out / "run.log").read_text(encoding="utf-8")
    assert "Sector scan" in capsys.readouterr().out
    document = json.loads((out / "report.json").read_text(encoding="utf-8"))
    sphere = document["sphere"]
    assert sorted(sphere, key=int) == ["-2", "-1", "0", "1", "2"]
    assert sphere["0"]["assembly_grid_sizes"] == [64, 128, 256]
    assert sphere["0"]["assembly_order"] > 1.5
    assert sphere["1"]["odd_obstruction"]["c"] == pytest.approx(sphere["1"]["odd_obstruction"]["c_expected"])
    norms = document["results"][0]["metadata"]["norms"]
    assert norms["dirac"]["exact"] is True
    assert norms["samples"]["exact"] is False


def test_torus_circle_full_check_passes(tmp_path):
    path = write_scenario(tmp_path, 'model = "torus"\nn = 1\nK = 3\n')
    out = tmp_path / "out"
    assert check(path, out) == app.EXIT_CONCLUSIVE
    document = json.loads((out / "report.json").read_text(encoding="utf-8"))
    (result,) = document["results"]
    assert result["factorises"] == "pass"
    verdicts = {name: entry["verdict"] for name, entry in result["checks"].items()}
    assert verdicts == {
        "ssa": "pass",
        "condition1": "pass",
        "condition2": "pass",
        "positivity": "pass",
        "certificate": "skipped",
        "product_gap": "skipped",
    }
    assert result["metadata"]["doubled"] is True


def test_warped_product_gap_is_flagged(tmp_path):
    path = write_scenario(
        tmp_path,
        """
        model = "warped_torus"
        N = 32
        K = 4
        profile = "sin-bump"
        checks = ["product_gap"]
        """,
    )
    out = tmp_path / "out"
    assert check(path, out) == app.EXIT_CONCLUSIVE
    gap = pd.read_csv(out / "product_gap.csv", index_col=0)
    assert list(gap.columns) == ["ell", "sector", "abs_k", "gap", "product_norm"]
    assert len(gap) == 9
    scan = pd.read_csv(out / "scan.csv", index_col=0)
    assert scan.loc[1, "product_gap"] == "fail"
    assert scan.loc[1, "gap_slope"] == pytest.approx(4 * np.pi / 3, rel=0.1)


def test_reports_are_byte_identical(tmp_path):
    path = write_scenario(tmp_path, TORUS)
    assert check(path, tmp_path / "a") == app.EXIT_CONCLUSIVE
    assert check(path, tmp_path / "b") == app.EXIT_CONCLUSIVE
    for name in ("report.json", "report.txt", "scan.csv", "sectors.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert "schema_version" in (tmp_path / "a" / "report.json").read_text(encoding="utf-8")


def test_flags_override_the_scenario(tmp_path):
    path = write_scenario(tmp_path, 'model = "torus"\nn = 2\nK = 8\nrefinements = 2\noutput = "elsewhere"\n')
    out = tmp_path / "out"
    assert check(path, out, "--window", "3", "--refinements", "1") == app.EXIT_CONCLUSIVE
    scenario = json.loads((out / "report.json").read_text(encoding="utf-8"))["scenario"]
    assert (scenario["K"], scenario["refinements"]) == (3, 1)
    assert not (tmp_path / "elsewhere").exists()


def test_nc_torus_reports_relations(tmp_path):
    path = write_scenario(
        tmp_path,
        """
        model = "nc_torus"
        n = 2
        K = 3
        theta_matrix = [[0, "1/3"], ["-1/3", 0]]
        """,
    )
    out = tmp_path / "out"
    assert check(path, out) == app.EXIT_CONCLUSIVE
    document = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert document["nc_torus"]["relation_holds_exactly"] is True
    assert document["nc_torus"]["relation_residual"] < 1e-12
    assert document["results"][0]["metadata"]["theta"] == [["0", "1/3"], ["-1/3", "0"]]


def test_inconclusive_run_exits_with_two(tmp_path, monkeypatch):
    def fake_check(model, zeta, *args):
        passing = CheckResult("x", Verdict.PASS)
        unsettled = CheckResult("positivity", Verdict.INCONCLUSIVE, {"infimum": -1.0})
        skipped = CheckResult.skipped("y", "not requested")
        return CheckReport(zeta, {}, passing, passing, passing, unsettled, skipped, skipped)

    monkeypatch.setattr(app, "run_full_check", fake_check)
    path = write_scenario(tmp_path, TORUS)
    assert check(path, tmp_path / "out") == app.EXIT_INCONCLUSIVE
    document = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
    assert document["conclusive"] is False


class TestErrors:
    def test_invalid_scenario(self, tmp_path, capsys):
        path = write_scenario(tmp_path, 'model = "torus"\nK = 1\n')
        assert check(path, tmp_path / "out") == app.EXIT_ERROR
        assert "line 2: K must be at least 2" in capsys.readouterr().err

    def test_missing_scenario(self, tmp_path, capsys):
        assert check(tmp_path / "missing.toml", tmp_path / "out") == app.EXIT_ERROR
        assert "cannot read scenario" in capsys.readouterr().err

    def test_usage_error(self):
        assert app.main(["check"]) == app.EXIT_ERROR

    def test_unwritable_output(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        path = write_scenario(tmp_path, f'model = "torus"\nn = 2\nK = 3\noutput = "{(blocker / "out").as_posix()}"\n')
        assert app.main(["check", str(path)]) == app.EXIT_ERROR
        assert "blocker" in capsys.readouterr().err

    def test_model_configuration_error(self, tmp_path, capsys):
        path = write_scenario(tmp_path, 'model = "sphere"\nN = 32\nK = 3\n')
        assert check(path, tmp_path / "out") == app.EXIT_ERROR
        assert "error:" in capsys.readouterr().err
