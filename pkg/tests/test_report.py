import json
import math
from fractions import Fraction

import numpy as np
import pytest

import report
from app import run_scenario
from factor_check import CheckReport, CheckResult, Verdict
from scenario import parse_scenario
from sectors import Character


@pytest.fixture(scope="module")
def torus_run():
    scenario = parse_scenario('model = "torus"\nn = 2\nK = 3\nell_range = [0, 1]\n')
    return scenario, run_scenario(scenario)


def skipped_report(ell):
    skipped = CheckResult.skipped("x", "not requested")
    return CheckReport(Character.of(ell), {}, skipped, skipped, skipped, skipped, skipped, skipped)


class TestCanonicalJson:
    def test_example(self):
        text = report.dumps_canonical({"b": 1.5, "a": [math.inf, None]})
        assert text == '{\n  "a": [\n    "inf",\n    null\n  ],\n  "b": 1.5000000000000000e+00\n}'

    def test_scalars(self):
        assert report.dumps_canonical(True) == "true"
        assert report.dumps_canonical(3) == "3"
        assert report.dumps_canonical(np.float64(0.1)) == "1.0000000000000001e-01"
        assert report.dumps_canonical(-math.inf) == '"-inf"'
        assert report.dumps_canonical(math.nan) == '"nan"'
        assert report.dumps_canonical(Fraction(1, 3)) == '"1/3"'
        assert report.dumps_canonical(Character.of(1, -1)) == '"(1, -1)"'
        assert report.dumps_canonical(Verdict.PASS) == '"pass"'
        assert report.dumps_canonical({}) == "{}"

    def test_keys_are_sorted(self):
        text = report.dumps_canonical({"z": 1, "a": {"y": 2, "b": 3}})
        assert text.index('"a"') < text.index('"z"')
        assert text.index('"b"') < text.index('"y"')

    def test_round_trips_through_json(self):
        value = {"x": [1, 2.5, "s"], "flag": False}
        assert json.loads(report.dumps_canonical(value)) == value

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            report.dumps_canonical(object())


class TestScanTable:
    def test_torus_rows(self, torus_run):
        scenario, reports = torus_run
        scan = report.scan_table(scenario, reports)
        assert list(scan.index) == [1, 2]
        assert list(scan["ell"]) == [0, 1]
        assert list(scan["factorises"]) == ["pass", "pass"]
        assert list(scan["certificate"]) == ["skipped", "skipped"]
        assert np.isnan(scan["gap_slope"]).all()
        assert "branch" not in scan.columns

    def test_sphere_rows_carry_the_case_analysis(self):
        scenario = parse_scenario('model = "sphere"\nk_lift = 1\nell_range = [0, 2]\n')
        scan = report.scan_table(scenario, {ell: skipped_report(ell) for ell in scenario.ells})
        assert list(scan["branch"]) == ["odd", "even", "odd"]
        assert list(scan["predicted"]) == ["pass", "pass", "fail"]
        assert list(scan["predicted_min"]) == [0.0, 0.0, -1.0]
        assert list(scan["factorises"]) == ["inconclusive"] * 3


class TestDocument:
    def test_structure(self, torus_run):
        scenario, reports = torus_run
        document = json.loads(report.dumps_canonical(report.report_document(scenario, reports)))
        assert document["schema_version"] == 1
        assert "output" not in document["scenario"]
        assert document["conclusive"] is True
        assert [r["ell"] for r in document["results"]] == [0, 1]
        first = document["results"][0]
        assert first["zeta"] == "(0, 0)"
        assert first["checks"]["ssa"]["verdict"] == "pass"
        assert first["checks"]["certificate"]["witness"] == {"reason": "not requested"}
        assert len(first["checks"]["positivity"]["table"]) == 49

    def test_extras_are_merged(self, torus_run):
        scenario, reports = torus_run
        document = report.report_document(scenario, reports, {"nc_torus": {"relation_residual": 0.0}})
        assert document["nc_torus"] == {"relation_residual": 0.0}


def test_tables(torus_run):
    scenario, reports = torus_run
    tables = report.report_tables(scenario, reports)
    assert set(tables) == {"scan.csv", "sectors.csv"}
    sectors = tables["sectors.csv"]
    assert list(sectors.columns[:2]) == ["ell", "sector"]
    assert len(sectors) == 2 * 49
    assert sectors.index[0] == 1


def test_text_is_deterministic(torus_run):
    scenario, reports = torus_run
    text = report.render_text(scenario, reports)
    assert text == report.render_text(scenario, reports)
    assert "Sector scan" in text
    assert "Checks" in text
    assert "not requested" in text


def test_write_reports(tmp_path, torus_run):
    scenario, reports = torus_run
    document = report.report_document(scenario, reports)
    written = report.write_reports(
        tmp_path / "out",
        document,
        report.render_text(scenario, reports),
        report.report_tables(scenario, reports),
    )
    assert [p.name for p in written] == ["report.json", "report.txt", "scan.csv", "sectors.csv"]
    assert json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))["title"]
    assert (tmp_path / "out" / "scan.csv").read_text(encoding="utf-8").startswith(",ell,factorises")
