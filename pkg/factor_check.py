"""Factorisation checks for torus-equivariant spectral triples.

Given a model and a sector zeta, the checks decide whether the triple factorises through the
fixed-point triple at zeta: the spectral subspace assumption, the two Clifford-action conditions,
and positivity of the Dirac operator against the closed-form product operator M. For models with
orbit metric data there is also a lower-bound certificate and the constructive product with its
gap table.

Every check returns a ``CheckResult`` carrying a verdict and the numbers behind it.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import itertools
import logging
import sys
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

import constants
from errors import ConfigurationError, MetricError, PreconditionError
from graded_core import GradedMatrix
from models import clifford_eta, default_samples, normalised_covectors, orbit_connection_norms
from sectors import (
    Character,
    SectorOperator,
    norm_is_exact,
    operator_norm,
    restrict_to_sector,
    self_adjoint_defect,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from models import AlgebraSample, EquivariantModel
    from orbit_space import OrbitSpaceModel

logger = logging.getLogger(__name__)

if sys.version_info >= (3, 11):
    _StrEnum = enum.StrEnum
else:  # Python 3.10 compatibility: same str()/format() behaviour as enum.StrEnum

    class _StrEnum(str, enum.Enum):
        __str__ = str.__str__
        __format__ = str.__format__


class Verdict(_StrEnum):
    """Outcome of a check."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    SKIPPED = "skipped"

    @property
    def conclusive(self) -> bool:
        """Pass, fail and skipped are conclusive."""
        return self is not Verdict.INCONCLUSIVE


@dataclasses.dataclass(frozen=True, eq=False)
class CheckResult:
    """Verdict of one check with its numeric witness and an optional per-row table."""

    name: str
    verdict: Verdict
    witness: dict[str, object] = dataclasses.field(default_factory=dict)
    table: pd.DataFrame | None = None

    @classmethod
    def skipped(cls, name: str, reason: str) -> CheckResult:
        """A check that was not run."""
        return cls(name, Verdict.SKIPPED, {"reason": reason})


@dataclasses.dataclass(frozen=True, eq=False)
class EtaData:
    """Clifford action eta(e_j) as shift-0 sector operators, together with the sector zeta."""

    generators: tuple[SectorOperator, ...]
    zeta: Character

    def defect(self, chi: Character) -> float:
        """Largest failure of self-adjointness, unitarity, oddness or anticommutation at sector ``chi``."""
        blocks = [restrict_to_sector(eta, chi) for eta in self.generators]
        eye = GradedMatrix.identity(blocks[0].even_dim, blocks[0].odd_dim)
        worst = 0.0
        for i, a in enumerate(blocks):
            worst = max(worst, (a - a.adjoint()).max_abs(), (a @ a - eye).max_abs())
            if a.odd_dim:
                worst = max(worst, a.even_part().norm())
            for b in blocks[i + 1 :]:
                worst = max(worst, (a @ b + b @ a).max_abs())
        return worst


def build_eta(model: EquivariantModel, zeta: Character) -> EtaData:
    """eta(e_j) = -i c(v_j) from the model's orbit metric, validated at ``zeta``.

    Raises:
    ------
        MetricError: If the model has no usable metric data.
        PreconditionError: If the generators are not anticommuting odd self-adjoint unitaries.
    """
    model.window.require(zeta)
    eta = EtaData(clifford_eta(model), zeta)
    defect = eta.defect(zeta)
    if defect > constants.CLIFFORD_TOL:
        msg = f"Clifford action is not a representation at sector {zeta.label()} (defect {defect:.3g})"
        raise PreconditionError(msg)
    return eta


def _character_order(chi: Character) -> tuple[int, tuple[int, ...]]:
    return chi.norm1, tuple(-x for x in chi.k)


def check_ssa(orbit: OrbitSpaceModel, characters: Iterable[Character] | None = None) -> CheckResult:
    """Spectral subspace assumption: every support must be clopen in the orbit space.

    Characters are visited by increasing size, positive before negative, and the first failure
    becomes the witness.

    Raises:
    ------
        ConfigurationError: If the orbit model has no cells.
    """
    if not orbit.cells:
        msg = "orbit space model has no cells"
        raise ConfigurationError(msg)
    pool = list(characters) if characters is not None else list(orbit.subspace_support)
    for chi in sorted(pool, key=_character_order):
        support = orbit.support(chi)
        if not orbit.is_clopen(support):
            cells = [orbit.cells[i].label() for i in sorted(support)]
            logger.info("SSA fails at character %s with support %s", chi.label(), cells)
            return CheckResult("ssa", Verdict.FAIL, {"character": chi.label(), "support": cells})
    return CheckResult("ssa", Verdict.PASS, {"characters": len(pool), "cells": orbit.describe()})


def threshold_verdict(value: float, threshold: float, band: float = constants.STABILITY_BAND) -> Verdict:
    """Pass below ``threshold``, fail above it, inconclusive within ``band`` of it relatively."""
    if abs(value - threshold) <= band * abs(threshold):
        return Verdict.INCONCLUSIVE
    return Verdict.PASS if value < threshold else Verdict.FAIL


def combine_verdicts(verdicts: Iterable[Verdict]) -> Verdict:
    """Any fail fails; otherwise any inconclusive is inconclusive."""
    seen = set(verdicts)
    if Verdict.FAIL in seen:
        return Verdict.FAIL
    if Verdict.INCONCLUSIVE in seen:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def check_condition1(
    model: EquivariantModel,
    eta: EtaData,
    fixed_point_samples: list[AlgebraSample],
    band: float = constants.STABILITY_BAND,
) -> CheckResult:
    """[eta(e_j), a] = 0 for fixed-point algebra elements a.

    Raises:
    ------
        PreconditionError: If a sample is not of character zero.
    """
    zero = Character.zero(model.rank)
    worst = 0.0
    for sample in fixed_point_samples:
        if sample.character != zero:
            msg = f"fixed-point samples must have character 0, got {sample.character.label()}"
            raise PreconditionError(msg)
        a = model.multiplication(sample)
        for chi in model.window.characters():
            a_block = restrict_to_sector(a, chi)
            for generator in eta.generators:
                e = restrict_to_sector(generator, chi)
                worst = max(worst, (e @ a_block - a_block @ e).norm())
    verdict = threshold_verdict(worst, constants.CONDITION1_TOL, band)
    logger.info("Condition 1: %s (max commutator %.3e)", verdict, worst)
    return CheckResult("condition1", verdict, {"max_violation": worst, "samples": len(fixed_point_samples)})


def _anticommutator(dirac: GradedMatrix, eta: GradedMatrix) -> GradedMatrix:
    return dirac @ eta + eta @ dirac


def condition2_norms(model: EquivariantModel, eta: EtaData, samples: list[AlgebraSample]) -> list[dict[str, object]]:
    """||[D, eta(e_j)] a P_zeta|| for every generator and sample; samples leaving the window are skipped."""
    zeta = eta.zeta
    rows = []
    for sample in samples:
        target = zeta + sample.character
        if not model.window.contains(target):
            continue
        a = model.multiplication(sample)
        a_block = a.blocks[(sample.character, zeta)]
        dirac = restrict_to_sector(model.dirac, target)
        for j, generator in enumerate(eta.generators):
            term = _anticommutator(dirac, restrict_to_sector(generator, target)) @ a_block
            rows.append(
                {
                    "generator": j + 1,
                    "character": sample.character.label(),
                    "centre": sample.centre,
                    "norm": term.norm(),
                },
            )
    return rows


def check_condition2(
    model: EquivariantModel,
    eta: EtaData,
    algebra_samples: list[AlgebraSample],
    refinements: int = 1,
    band: float = constants.STABILITY_BAND,
) -> CheckResult:
    """[D, eta(e_j)] a P_zeta is bounded: its norm must settle under grid refinement.

    The norms on the finest two grids may differ by at most the ratio limit. Models that know the
    exact value (``condition2_analytic``) are also compared against it within 2%. Ratios and
    mismatches within ``band`` of their limits are inconclusive.
    """
    levels = []
    current, current_eta = model, eta
    for level in range(refinements + 1):
        if level:
            current = current.refine()
            current_eta = build_eta(current, eta.zeta)
        levels.append(condition2_norms(current, current_eta, algebra_samples))
    table = pd.DataFrame(levels[0]).rename(columns={"norm": "norm_0"})
    for level, rows in enumerate(levels[1:], start=1):
        table[f"norm_{level}"] = [row["norm"] for row in rows]
    if table.empty:
        return CheckResult("condition2", Verdict.PASS, {"samples": 0}, table)
    finest, previous = table[f"norm_{refinements}"], table[f"norm_{max(refinements - 1, 0)}"]
    scale = np.maximum(previous, constants.STABILITY_ATOL)
    table["ratio"] = np.where(np.maximum(finest, previous) <= constants.STABILITY_ATOL, 1.0, finest / scale)
    table["verdict"] = [threshold_verdict(r, constants.CONDITION2_RATIO_LIMIT, band) for r in table["ratio"]]
    analytic = getattr(model, "condition2_analytic", None)
    if analytic is not None:
        exact = {(s.character.label(), s.centre): analytic(s, eta.zeta) for s in algebra_samples}
        table["analytic"] = [exact[(c, x)] for c, x in zip(table["character"], table["centre"], strict=True)]
        allowed = np.maximum(constants.CONDITION2_ANALYTIC_RTOL * table["analytic"], constants.STABILITY_ATOL)
        deviation = np.abs(finest - table["analytic"])
        mismatch = [threshold_verdict(e, a, band) for e, a in zip(deviation, allowed, strict=True)]
        table["verdict"] = [combine_verdicts(pair) for pair in zip(table["verdict"], mismatch, strict=True)]
    verdict = combine_verdicts(table["verdict"])
    table.index += 1
    logger.info("Condition 2: %s over %d rows", verdict, len(table))
    return CheckResult(
        "condition2",
        verdict,
        {"max_norm": float(finest.max()), "max_ratio": float(table["ratio"].max())},
        table,
    )


def product_operator(model: EquivariantModel, eta: EtaData, zeta: Character | None = None) -> SectorOperator:
    """M = -i sum_j c(v_j) (A_j - 2 pi zeta_j) with v_j = sum_r W^{rj} X_r^flat.

    Since eta(e_j) = -i c(v_j), the sector-m block is sum_j eta(e_j) 2 pi (m_j - zeta_j).

    Raises:
    ------
        MetricError: If the model has no usable metric data.
    """
    zeta = eta.zeta if zeta is None else zeta
    covectors = normalised_covectors(model)
    generators = model.generators()

    def block(m: Character) -> GradedMatrix:
        terms = []
        for v, a, ell in zip(covectors, generators, zeta.k, strict=True):
            shifted = restrict_to_sector(a, m) + _identity_like(a, m).scale(-constants.TWO_PI * ell)
            terms.append((restrict_to_sector(v, m) @ shifted).scale(-1j))
        return functools.reduce(lambda x, y: x + y, terms)

    return SectorOperator.from_function(
        model.space,
        Character.zero(model.rank),
        block,
        covectors[0].parity or eta.generators[0].parity,
        lazy=True,
    )


def _identity_like(op: SectorOperator, chi: Character) -> GradedMatrix:
    block = restrict_to_sector(op, chi)
    return type(block).identity(block.even_dim, block.odd_dim)


def positivity_form(model: EquivariantModel, product: SectorOperator, chi: Character) -> GradedMatrix:
    """D M + M D restricted to sector ``chi``."""
    dirac = restrict_to_sector(model.dirac, chi)
    m = restrict_to_sector(product, chi)
    return dirac @ m + m @ dirac


def sector_minima(model: EquivariantModel, eta: EtaData) -> dict[Character, float]:
    """Smallest eigenvalue of D M + M D on each sector of the window."""
    product = product_operator(model, eta)
    minima = {}
    for chi in model.window.characters():
        form = positivity_form(model, product, chi)
        minima[chi] = form.min_eigenvalue()
    return minima


def stability_verdict(previous: float, current: float, band: float = constants.STABILITY_BAND) -> Verdict:
    """Classify the change of a quantity under one refinement."""
    change = abs(current - previous)
    if change <= constants.STABILITY_ATOL:
        return Verdict.PASS
    relative = change / max(abs(previous), abs(current))
    if relative <= band:
        return Verdict.PASS
    if relative > constants.INCONCLUSIVE_FACTOR * band:
        return Verdict.FAIL
    return Verdict.INCONCLUSIVE


def positivity_scan(
    model: EquivariantModel,
    eta: EtaData,
    zeta: Character | None = None,
    refinements: int = 1,
    band: float = constants.STABILITY_BAND,
) -> CheckResult:
    """Per-sector minima of D M + M D and their behaviour under refinement.

    The verdict is pass when the infimum over sectors settles within ``band``; diverging sectors
    are reported with their rate log2(lambda_fine / lambda_coarse).

    Raises:
    ------
        ConfigurationError: If the window has fewer than three sectors either side of zero.
    """
    if model.window.K < constants.MIN_POSITIVITY_WINDOW:
        msg = f"positivity scans need K >= {constants.MIN_POSITIVITY_WINDOW}, got K={model.window.K}"
        raise ConfigurationError(msg)
    zeta = eta.zeta if zeta is None else zeta
    levels = []
    current, current_eta = model, eta
    for level in range(refinements + 1):
        if level:
            current = current.refine()
            current_eta = build_eta(current, zeta)
        levels.append(sector_minima(current, current_eta))
    characters = model.window.characters()
    table = pd.DataFrame(
        {
            "sector": [chi.label() for chi in characters],
            **{f"lambda_min_{level}": [minima[chi] for chi in characters] for level, minima in enumerate(levels)},
        },
    )
    coarse, fine = table[f"lambda_min_{max(refinements - 1, 0)}"], table[f"lambda_min_{refinements}"]
    diverging = (fine < -constants.STABILITY_ATOL) & (fine < coarse * (1 + band))
    with np.errstate(divide="ignore", invalid="ignore"):
        table["rate"] = np.where(diverging, np.log2(fine / coarse), 0.0)
    table.index += 1
    infima = [min(minima.values()) for minima in levels]
    verdict = stability_verdict(infima[-2], infima[-1], band) if refinements else Verdict.INCONCLUSIVE
    witness: dict[str, object] = {
        "infimum": infima[-1],
        "infima": infima,
        "diverging_sectors": [table["sector"][i] for i in table.index[diverging]],
    }
    logger.info("Positivity at zeta=%s: %s (infimum %.4g)", zeta.label(), verdict, infima[-1])
    return CheckResult("positivity", verdict, witness, table)


@dataclasses.dataclass(frozen=True)
class Certificate:
    """Lower bound Q(m) = a|m|^2 - b sum|m_j| - d sum|m_j - zeta_j| for the sector minima."""

    a: float
    b: float
    d: float
    R: float
    minimum: float

    @property
    def valid(self) -> bool:
        """The computed minima respect the bound."""
        return self.minimum >= self.R - constants.CERTIFICATE_TOL * max(1.0, abs(self.R))


def lower_bound_certificate(model: EquivariantModel, zeta: Character) -> Certificate:
    """Assemble a, b, d and R = min over the window of Q, then compare with the sector minima.

    Raises:
    ------
        MetricError: If the model has no usable metric data.
    """
    eta = build_eta(model, zeta)
    normaliser = model.metric().normaliser
    n = model.rank
    eight_pi_sq = 2 * constants.TWO_PI**2
    a = eight_pi_sq * model.metric().normaliser_min_eigenvalue
    b = eight_pi_sq * n * max(
        abs(zeta.k[j]) * float(np.abs(normaliser[:, j, p]).max()) for j in range(n) for p in range(n)
    )
    worst = 0.0
    for chi in model.window.characters():
        dirac = restrict_to_sector(model.dirac, chi)
        for j, generator in enumerate(eta.generators):
            expected = 2 * constants.TWO_PI * sum(chi.k[p] * normaliser[:, j, p] for p in range(n))
            residual = _anticommutator(dirac, restrict_to_sector(generator, chi)) - restrict_to_sector(
                model.pointwise(np.broadcast_to(expected, normaliser.shape[:1])),
                chi,
            )
            worst = max(worst, residual.norm())
    d = constants.TWO_PI * worst
    quadratic = {
        chi: a * sum(x * x for x in chi.k) - b * chi.norm1 - d * (chi - zeta).norm1 for chi in model.window.characters()
    }
    minimum = min(sector_minima(model, eta).values())
    certificate = Certificate(a, b, d, min(quadratic.values()), minimum)
    logger.info("Certificate a=%.4g b=%.4g d=%.3g R=%.4g valid=%s", a, b, d, certificate.R, certificate.valid)
    return certificate


def check_certificate(model: EquivariantModel, zeta: Character, band: float = constants.STABILITY_BAND) -> CheckResult:
    """The certificate as a check result; a shortfall R - minimum near the tolerance is inconclusive."""
    certificate = lower_bound_certificate(model, zeta)
    allowed = constants.CERTIFICATE_TOL * max(1.0, abs(certificate.R))
    verdict = threshold_verdict(certificate.R - certificate.minimum, allowed, band)
    return CheckResult("certificate", verdict, dataclasses.asdict(certificate) | {"valid": certificate.valid})


@dataclasses.dataclass(frozen=True, eq=False)
class GapReport:
    """Per-sector norms of (D - T) P_k and the fitted growth in |k|."""

    table: pd.DataFrame
    slope: float
    first_order_slope: float

    @property
    def bounded(self) -> bool:
        """The gap does not grow with the sector."""
        return abs(self.slope) <= constants.GAP_SLOPE_TOL


def constructive_product(model: EquivariantModel, zeta: Character) -> tuple[SectorOperator, GapReport]:
    """T = D + S + B with S = sum (W^{rj} - h^{rj}) c(X_r^flat) nabla_{X_j} and B = -(S - S*)/2.

    T is self-adjoint by construction and differs from D by (S + S*)/2.

    Raises:
    ------
        MetricError: If the model has no metric or connection data.
    """
    model.window.require(zeta)
    metric = model.metric()
    difference = metric.normaliser - metric.inverse
    flats = model.clifford_flat()
    connections = model.connection()
    n = model.rank
    weights = {(r, j): model.pointwise(difference[:, r, j]) for r in range(n) for j in range(n)}

    def correction(chi: Character) -> GradedMatrix:
        terms = [
            restrict_to_sector(weights[(r, j)], chi)
            @ restrict_to_sector(flats[r], chi)
            @ restrict_to_sector(connections[j], chi)
            for r, j in itertools.product(range(n), repeat=2)
        ]
        s = functools.reduce(lambda x, y: x + y, terms)
        return (s + s.adjoint()).scale(0.5)

    zero = Character.zero(n)
    parity = model.dirac.parity
    product = SectorOperator.from_function(
        model.space,
        zero,
        lambda chi: restrict_to_sector(model.dirac, chi) + correction(chi),
        parity,
        lazy=True,
    )
    m_op = product_operator(model, build_eta(model, zeta))
    rows = []
    for chi in model.window.characters():
        rows.append(
            {
                "sector": chi.label(),
                "abs_k": float(np.linalg.norm(chi.k)),
                "gap": correction(chi).norm(),
                "product_norm": restrict_to_sector(m_op, chi).norm(),
            },
        )
    table = pd.DataFrame(rows)
    slope = float(np.polyfit(table["abs_k"], table["gap"], 1)[0])
    lengths = np.sqrt(np.einsum("prr->pr", metric.gram))
    first_order = constants.TWO_PI * float(np.abs(np.einsum("prj,pr->pj", difference, lengths)).max())
    table.index += 1
    logger.info("Constructive product gap slope %.4g (first-order estimate %.4g)", slope, first_order)
    return product, GapReport(table, slope, first_order)


def check_product_gap(model: EquivariantModel, zeta: Character, band: float = constants.STABILITY_BAND) -> CheckResult:
    """The constructive-product gap as a check result; an unbounded gap is a fail."""
    _, gap = constructive_product(model, zeta)
    verdict = threshold_verdict(abs(gap.slope), constants.GAP_SLOPE_TOL, band)
    witness = {"slope": gap.slope, "first_order_slope": gap.first_order_slope, "bounded": gap.bounded}
    return CheckResult("product_gap", verdict, witness, gap.table)


@dataclasses.dataclass(frozen=True, eq=False)
class CheckReport:
    """All check results for one model and one zeta."""

    zeta: Character
    metadata: dict[str, object]
    ssa: CheckResult
    condition1: CheckResult
    condition2: CheckResult
    positivity: CheckResult
    certificate: CheckResult
    product_gap: CheckResult

    @property
    def results(self) -> list[CheckResult]:
        """Results in report order."""
        return [self.ssa, self.condition1, self.condition2, self.positivity, self.certificate, self.product_gap]

    @property
    def factorises(self) -> Verdict:
        """Conjunction of SSA, both conditions and positivity; skipped checks do not count."""
        core = [self.ssa, self.condition1, self.condition2, self.positivity]
        verdicts = [r.verdict for r in core if r.verdict is not Verdict.SKIPPED]
        if Verdict.FAIL in verdicts:
            return Verdict.FAIL
        if Verdict.INCONCLUSIVE in verdicts or not verdicts:
            return Verdict.INCONCLUSIVE
        return Verdict.PASS

    @property
    def conclusive(self) -> bool:
        """No requested check came out inconclusive."""
        return all(r.verdict.conclusive for r in self.results)


def _connection_spread(model: EquivariantModel) -> float | None:
    try:
        norms = orbit_connection_norms(model)
    except MetricError:
        return None
    values = np.array(list(norms.values()))
    return float((values.max(axis=0) - values.min(axis=0)).max())


def norm_record(model: EquivariantModel) -> dict[str, object]:
    """Window norms of D and of the summed default samples.

    The sample sum spans several shifts, so its norm is the summed per-shift bound.
    """
    record: dict[str, object] = {
        "dirac": {"norm": operator_norm(model.dirac), "exact": norm_is_exact(model.dirac)},
    }
    samples = default_samples(model)
    if samples:
        total = functools.reduce(lambda x, y: x + y, [model.multiplication(s) for s in samples])
        record["samples"] = {
            "norm": operator_norm(total),
            "exact": norm_is_exact(total),
            "shifts": len(total.shifts),
        }
    return record


def run_full_check(
    model: EquivariantModel,
    zeta: Character,
    checks: Iterable[str] = ("full",),
    refinements: int = 1,
    band: float = constants.STABILITY_BAND,
) -> CheckReport:
    """Run the requested checks in order; an SSA failure skips everything after it.

    ``full`` stands for the SSA, both conditions and positivity. The certificate and the product
    gap run only when asked for, and are skipped on models without orbit metric data.
    """
    wanted = set(checks)
    if "full" in wanted:
        wanted |= {"ssa", "cond1", "cond2", "positivity"}
    ssa = check_ssa(model.orbit_space(), model.window.characters()) if "ssa" in wanted else None
    blocked = ssa is not None and ssa.verdict is Verdict.FAIL
    eta = None if blocked else build_eta(model, zeta)

    def run(key: str, name: str, check: Callable[[EtaData], CheckResult]) -> CheckResult:
        if blocked:
            return CheckResult.skipped(name, "spectral subspace assumption fails")
        if key not in wanted or eta is None:
            return CheckResult.skipped(name, "not requested")
        try:
            return check(eta)
        except MetricError as err:
            logger.warning("%s skipped: %s", name, err)
            return CheckResult.skipped(name, str(err))

    condition1 = run(
        "cond1",
        "condition1",
        lambda e: check_condition1(model, e, default_samples(model, fixed_points=True), band),
    )
    condition2 = run(
        "cond2",
        "condition2",
        lambda e: check_condition2(model, e, default_samples(model), refinements, band),
    )
    positivity = run("positivity", "positivity", lambda e: positivity_scan(model, e, zeta, refinements, band))
    certificate = run("certificate", "certificate", lambda _: check_certificate(model, zeta, band))
    product_gap = run("product_gap", "product_gap", lambda _: check_product_gap(model, zeta, band))
    metadata = {
        **model.metadata(),
        "zeta": zeta.label(),
        "refinements": refinements,
        "dirac_self_adjoint_defect": self_adjoint_defect(model.dirac),
        "norms": norm_record(model),
    }
    spread = _connection_spread(model)
    if spread is not None:
        metadata["orbit_connection_spread"] = spread
    report = CheckReport(
        zeta,
        metadata,
        ssa or CheckResult.skipped("ssa", "not requested"),
        condition1,
        condition2,
        positivity,
        certificate,
        product_gap,
    )
    logger.info("zeta=%s factorises: %s", zeta.label(), report.factorises)
    return report
