"""Reports: canonical JSON, an aligned text table and CSV exports.

The canonical JSON is written by hand so that identical scenarios give byte-identical files:
keys are sorted, floats use 17 significant digits and non-finite floats become strings.
"""

from __future__ import annotations

import dataclasses
import io
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table
from rich.text import Text

import constants
from factor_check import Verdict
from sectors import Character
from sphere import polynomial_case_analysis

if TYPE_CHECKING:
    from factor_check import CheckReport
    from scenario import Scenario

logger = logging.getLogger(__name__)


def _plain(value: object) -> object:
    """Convert numpy, pandas and domain values into JSON-like Python values."""
    if isinstance(value, dict):
        return {str(_plain(k)): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, pd.DataFrame):
        return _plain(value.to_dict(orient="records"))
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, Fraction | Path):
        return str(value)
    if isinstance(value, Character):
        return value.label()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def _float_token(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return f"{x:.16e}"


def dumps_canonical(value: object, indent: int = 0) -> str:
    """Deterministic JSON text.

    Example:
    -------
        >>> dumps_canonical({"b": 1.5, "a": [float("inf"), None]})
        '{\\n  "a": [\\n    "inf",\\n    null\\n  ],\\n  "b": 1.5000000000000000e+00\\n}'

    """
    pad, inner = "  " * indent, "  " * (indent + 1)
    value = _plain(value)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _float_token(value)
    if isinstance(value, str):
        return json.dumps(str(value), ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{inner}{json.dumps(key, ensure_ascii=False)}: {dumps_canonical(value[key], indent + 1)}"
            for key in sorted(value)
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{inner}{dumps_canonical(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    msg = f"cannot serialise {type(value).__name__}"
    raise TypeError(msg)


def scenario_summary(scenario: Scenario) -> dict[str, object]:
    """Scenario fields for the report; the output directory is left out."""
    summary = dataclasses.asdict(scenario)
    summary.pop("output")
    return summary


def scan_table(scenario: Scenario, reports: dict[int, CheckReport]) -> pd.DataFrame:
    """One row per scanned l with every verdict, the positivity infimum and the product-gap slope.

    Sphere scans also carry the case analysis of the positivity polynomial for comparison.
    """
    rows = []
    for ell, report in reports.items():
        row: dict[str, object] = {"ell": ell, "factorises": str(report.factorises)}
        for result in report.results:
            row[result.name] = str(result.verdict)
        row["p_min"] = float(report.positivity.witness.get("infimum", math.nan))  # type: ignore[arg-type]
        row["gap_slope"] = float(report.product_gap.witness.get("slope", math.nan))  # type: ignore[arg-type]
        if scenario.model == "sphere":
            case = polynomial_case_analysis(scenario.k_lift, ell)
            row["branch"] = case.branch
            row["predicted_min"] = case.integer_minimum
            row["predicted"] = str(Verdict.PASS if case.predicted_pass else Verdict.FAIL)
        rows.append(row)
    df = pd.DataFrame(rows)
    df.index += 1
    return df


def _stacked(reports: dict[int, CheckReport], name: str) -> pd.DataFrame:
    """Tables of one check across the scan, with an ``ell`` column in front."""
    frames = []
    for ell, report in reports.items():
        table = getattr(report, name).table
        if table is not None and not table.empty:
            frames.append(table.assign(ell=ell)[["ell", *table.columns]])
    if not frames:
        return pd.DataFrame()
    df = pd.concat(frames).reset_index(drop=True)
    df.index += 1
    return df


def report_tables(scenario: Scenario, reports: dict[int, CheckReport]) -> dict[str, pd.DataFrame]:
    """CSV file name to table; empty tables are left out."""
    tables = {
        constants.SCAN_CSV: scan_table(scenario, reports),
        constants.SECTORS_CSV: _stacked(reports, "positivity"),
        constants.GAP_CSV: _stacked(reports, "product_gap"),
    }
    return {name: df for name, df in tables.items() if not df.empty}


def report_document(
    scenario: Scenario,
    reports: dict[int, CheckReport],
    extras: dict[str, object] | None = None,
) -> dict[str, object]:
    """The canonical report as plain data."""
    results = []
    for ell, report in reports.items():
        results.append(
            {
                "ell": ell,
                "zeta": report.zeta,
                "factorises": report.factorises,
                "conclusive": report.conclusive,
                "metadata": report.metadata,
                "checks": {
                    r.name: {"verdict": r.verdict, "witness": r.witness, "table": r.table} for r in report.results
                },
            },
        )
    return {
        "schema_version": constants.SCHEMA_VERSION,
        "title": constants.APP_TITLE,
        "scenario": scenario_summary(scenario),
        "scan": scan_table(scenario, reports),
        "results": results,
        "conclusive": all(report.conclusive for report in reports.values()),
        **(extras or {}),
    }


def _cell(value: object) -> Text:
    if isinstance(value, float | np.floating):
        return Text(f"{value:.6g}")
    return Text(str(value))


def _witness_summary(witness: dict[str, object]) -> str:
    parts = []
    for key in sorted(witness):
        value = witness[key]
        if isinstance(value, float | np.floating):
            parts.append(f"{key}={value:.6g}")
        elif isinstance(value, list) and len(value) > 4:  # noqa: PLR2004
            parts.append(f"{key}=[{len(value)} items]")
        elif isinstance(value, list):
            parts.append(f"{key}=[{', '.join(str(_cell(v)) for v in value)}]")
        elif not isinstance(value, dict):
            parts.append(f"{key}={value}")
    return " ".join(parts)


def render_text(scenario: Scenario, reports: dict[int, CheckReport]) -> str:
    """Aligned UTF-8 text: the sector scan followed by every check's witness."""
    console = Console(file=io.StringIO(), record=True, color_system=None, width=120, highlight=False)
    console.print(Text(f"{constants.APP_TITLE}: {scenario.model}"))

    scan = scan_table(scenario, reports)
    table = Table(title="Sector scan")
    for column in scan.columns:
        justify = "right" if pd.api.types.is_numeric_dtype(scan[column]) else "left"
        table.add_column(str(column), justify=justify)
    for row in scan.itertuples(index=False):
        table.add_row(*(_cell(v) for v in row))
    console.print(table)

    details = Table(title="Checks")
    for column in ("ell", "check", "verdict", "witness"):
        details.add_column(column)
    for ell, report in reports.items():
        for result in report.results:
            summary = Text(_witness_summary(result.witness))
            details.add_row(_cell(ell), Text(result.name), Text(str(result.verdict)), summary)
    console.print(details)
    return console.export_text()


def table_to_csv(df: pd.DataFrame, encoding: str = "utf-8") -> bytes:
    """Convert a DataFrame to csv bytes."""
    return df.to_csv().encode(encoding)


def write_reports(
    out_dir: Path,
    document: dict[str, object],
    text: str,
    tables: dict[str, pd.DataFrame],
) -> list[Path]:
    """Write the JSON report, the text table and the CSV tables into ``out_dir``.

    Raises:
    ------
        OSError: If a file cannot be written; the error carries the path.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    json_path = out_dir / constants.REPORT_JSON
    json_path.write_text(dumps_canonical(document) + "\n", encoding="utf-8")
    written.append(json_path)
    text_path = out_dir / constants.REPORT_TEXT
    text_path.write_text(text, encoding="utf-8")
    written.append(text_path)
    for name, df in tables.items():
        path = out_dir / name
        path.write_bytes(table_to_csv(df))
        written.append(path)
    logger.info("Wrote %s", ", ".join(p.name for p in written))
    return written
