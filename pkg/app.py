"""Command-line front end: check a scenario and write its reports."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

import constants
import report
import scenario as sc
from app_management import RunManager
from errors import FactorisationError
from factor_check import CheckReport, run_full_check
from sphere import assembly_convergence, odd_obstruction

logger = logging.getLogger(__name__)

EXIT_CONCLUSIVE = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


def nc_torus_diagnostics(scenario: sc.Scenario) -> dict[str, object]:
    """Relation residuals of the noncommutative torus generators behind a deformed scenario."""
    generators = scenario.nc_torus()
    return {
        "nc_torus": {
            "relation_holds_exactly": generators.relation_holds_exactly(),
            "relation_residual": generators.relation_residual(),
            "unitarity_defect": generators.unitarity_defect(),
        },
    }


def sphere_diagnostics(scenario: sc.Scenario) -> dict[str, object]:
    """Odd-obstruction norms and the polar assembly convergence study for every scanned l."""
    model = scenario.build_model()
    grids = (scenario.N, 2 * scenario.N, 4 * scenario.N)
    sectors = {}
    for ell in scenario.ells:
        study = assembly_convergence(scenario.k_lift, ell, grids, scenario.margin)
        sectors[str(ell)] = {
            "odd_obstruction": odd_obstruction(model, ell),
            "assembly_grid_sizes": list(study.grid_sizes),
            "assembly_discrepancies": list(study.discrepancies),
            "assembly_order": study.order,
        }
    return {"sphere": sectors}


def diagnostics(scenario: sc.Scenario) -> dict[str, object]:
    """Model-specific additions to the report."""
    if scenario.deformed:
        return nc_torus_diagnostics(scenario)
    if scenario.model == "sphere":
        return sphere_diagnostics(scenario)
    return {}


def run_scenario(scenario: sc.Scenario) -> dict[int, CheckReport]:
    """Build the model once and run the requested checks for every l in the scan."""
    model = scenario.build_model()
    logger.info("Checking %s for l in %s", scenario.model, list(scenario.ells))
    return {
        ell: run_full_check(model, scenario.zeta(ell), scenario.checks, scenario.refinements, scenario.stability_band)
        for ell in scenario.ells
    }


def run(scenario: sc.Scenario) -> int:
    """Run a validated scenario, write its artifacts and return the exit code.

    Raises:
    ------
        FactorisationError: If the model cannot be built or a check cannot run.
        OSError: If the reports cannot be written.
    """
    with RunManager(scenario.output):
        reports = run_scenario(scenario)
        extras = diagnostics(scenario)
        document = report.report_document(scenario, reports, extras)
        text = report.render_text(scenario, reports)
        report.write_reports(scenario.output, document, text, report.report_tables(scenario, reports))
    conclusive = all(r.conclusive for r in reports.values())
    return EXIT_CONCLUSIVE if conclusive else EXIT_INCONCLUSIVE


@click.group()
def cli() -> None:
    """Check factorisation of torus-equivariant spectral triples."""


@cli.command()
@click.argument("scenario_file", type=click.Path(path_type=Path))
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path), help="Output directory.")
@click.option("--refinements", type=int, help="Grid refinements per check.")
@click.option("--window", type=int, help="Character window K.")
def check(scenario_file: Path, out_dir: Path | None, refinements: int | None, window: int | None) -> None:
    """Check SCENARIO_FILE and write the reports."""
    scenario = sc.override(sc.load_scenario(scenario_file), output=out_dir, refinements=refinements, K=window)
    code = run(scenario)
    click.echo((scenario.output / constants.REPORT_TEXT).read_text(encoding="utf-8"), nl=False)
    click.get_current_context().exit(code)


def main(argv: list[str] | None = None) -> int:
    """Entry point returning the exit code instead of raising SystemExit."""
    try:
        code = cli.main(args=argv, standalone_mode=False)
    except click.ClickException as err:
        err.show()
        return EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    except FactorisationError as err:
        click.echo(f"error: {err}", err=True)
        return EXIT_ERROR
    except OSError as err:
        click.echo(f"error: {err.filename or 'output'}: {err.strerror or err}", err=True)
        return EXIT_ERROR
    return code if isinstance(code, int) else EXIT_CONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
