"""Scenario files for the command line.

A scenario is a flat TOML table naming one model, its parameters, the checks to run and the
range of sectors l to scan. Arrays carry profile samples and the rows of the deformation matrix.

Examples
--------
    >>> scenario = parse_scenario('model = "sphere"\\nell_range = [-2, 2]\\n')
    >>> list(scenario.ells)
    [-2, -1, 0, 1, 2]

"""

from __future__ import annotations

import dataclasses
import inspect
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

if sys.version_info >= (3, 11):
    import tomllib
else:  # Python 3.10 compatibility
    import tomli as tomllib

import constants
from deformation import build_nc_torus, deform
from errors import FactorisationError, ScenarioError
from models import build_torus, build_warped_torus
from profiles import PROFILE_REGISTRY, Profile
from sectors import Character
from sphere import build_sphere

if TYPE_CHECKING:
    from deformation import DeformedModel, NCTorusGenerators, Phase
    from models import EquivariantModel

logger = logging.getLogger(__name__)

_INT_KEYS = {"n", "K", "N", "k_lift", "refinements"}
_FLOAT_KEYS = {"margin", "stability_band", "profile_offset", "profile_amplitude", "profile_center", "profile_width"}
_STRING_KEYS = {"model", "profile", "output"}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _STRING_KEYS | {"poles", "checks", "ell_range", "f_samples", "theta_matrix"}
_PROFILE_PREFIX = "profile_"


@dataclasses.dataclass
class Scenario:
    """One model, its parameters and the checks to run on it.

    Default values describe a small punctured-sphere run. ``n`` is the torus dimension for
    ``torus`` and ``nc_torus`` and the fibre rank for ``warped_torus``.
    """

    model: str = "sphere"
    n: int = 1
    K: int = 8
    N: int = 256
    margin: float = 0.05
    k_lift: int = 0
    poles: bool = False
    profile: str = "sin-bump"
    profile_params: dict[str, float] = dataclasses.field(default_factory=dict)
    f_samples: list[float] | None = None
    theta_matrix: list[list[Phase]] | None = None
    checks: list[str] = dataclasses.field(default_factory=lambda: ["full"])
    ell_range: tuple[int, int] = (0, 0)
    refinements: int = 1
    stability_band: float = constants.STABILITY_BAND
    output: Path = Path("out")

    @property
    def rank(self) -> int:
        """Dimension of the acting torus."""
        return 1 if self.model == "sphere" else self.n

    @property
    def ells(self) -> range:
        """Sectors l to scan, inclusive."""
        return range(self.ell_range[0], self.ell_range[1] + 1)

    @property
    def deformed(self) -> bool:
        """Whether the model is theta-deformed before checking."""
        if self.model == "nc_torus":
            return True
        return self.theta_matrix is not None and any(x != 0 for row in self.theta_matrix for x in row)

    @property
    def profile_spec(self) -> Profile:
        """Orbit-length profile of a warped torus."""
        if self.f_samples is not None:
            return Profile.from_samples(self.f_samples)
        return Profile.named(self.profile, **self.profile_params)

    def zeta(self, ell: int) -> Character:
        """Sector l along the first torus generator."""
        return Character((ell,) + (0,) * (self.rank - 1))

    def build_model(self) -> EquivariantModel | DeformedModel:
        """Build the model, deformed when the scenario carries a nonzero theta matrix.

        Raises:
        ------
            ConfigurationError: If the grid or window cannot be honoured.
            MetricError: If the profile is not positive.
        """
        model: EquivariantModel
        match self.model:
            case "torus" | "nc_torus":
                model = build_torus(self.n, self.K)
            case "warped_torus":
                model = build_warped_torus(self.profile_spec, self.N, self.K, self.k_lift, fibre_rank=self.n)
            case _:
                model = build_sphere(self.k_lift, self.N, self.K, self.margin, punctured=not self.poles)
        if self.deformed:
            return deform(model, self.theta)
        return model

    @property
    def theta(self) -> list[list[Phase]]:
        """Deformation matrix, zero when absent."""
        if self.theta_matrix is None:
            return [[Fraction(0)] * self.rank for _ in range(self.rank)]
        return self.theta_matrix

    def nc_torus(self) -> NCTorusGenerators:
        """Noncommutative torus generators for the deformation matrix."""
        return build_nc_torus(self.rank, self.theta, self.K)


def _line_of(text: str, key: str) -> int | None:
    pattern = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for number, line in enumerate(text.splitlines(), start=1):
        if pattern.match(line):
            return number
    return None


def _decode(text: str) -> dict[str, object]:
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        match = re.search(r"line (\d+)", str(err))
        raise ScenarioError(f"invalid TOML: {err}", int(match.group(1)) if match else None) from err


def _is_int(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: object) -> bool:
    return _is_int(value) or isinstance(value, float)


def _phase(value: object) -> Phase:
    if isinstance(value, str):
        return Fraction(value)
    if _is_int(value):
        return Fraction(int(value))  # type: ignore[arg-type]
    if isinstance(value, float):
        return value
    raise TypeError(value)


class _Reader:
    """Typed access to the decoded table, raising with the line of the offending key."""

    def __init__(self, text: str, table: dict[str, object]) -> None:
        self.text = text
        self.table = table

    def fail(self, key: str, message: str) -> ScenarioError:
        return ScenarioError(message, _line_of(self.text, key))

    def check_types(self) -> None:
        for key, value in self.table.items():
            if key not in _KNOWN_KEYS:
                raise self.fail(key, f"unknown key {key!r}")
            if key in _INT_KEYS and not _is_int(value):
                raise self.fail(key, f"{key} must be an integer")
            if key in _FLOAT_KEYS and not _is_number(value):
                raise self.fail(key, f"{key} must be a number")
            if key in _STRING_KEYS and not isinstance(value, str):
                raise self.fail(key, f"{key} must be a string")
            if key == "poles" and not isinstance(value, bool):
                raise self.fail(key, "poles must be true or false")

    def ell_range(self) -> tuple[int, int] | None:
        value = self.table.get("ell_range")
        if value is None:
            return None
        if _is_int(value):
            return int(value), int(value)  # type: ignore[call-overload]
        if isinstance(value, list) and len(value) == 2 and all(_is_int(x) for x in value) and value[0] <= value[1]:
            return int(value[0]), int(value[1])
        raise self.fail("ell_range", "ell_range must be an integer or an increasing pair [lo, hi]")

    def checks(self) -> list[str] | None:
        value = self.table.get("checks")
        if value is None:
            return None
        if not isinstance(value, list) or not value:
            raise self.fail("checks", "checks must be a non-empty list")
        unknown = [x for x in value if x not in constants.CHECK_OPTIONS]
        if unknown:
            raise self.fail("checks", f"unknown checks {unknown}; expected a subset of {constants.CHECK_OPTIONS}")
        return [str(x) for x in value]

    def f_samples(self) -> list[float] | None:
        value = self.table.get("f_samples")
        if value is None:
            return None
        if not isinstance(value, list) or not value or not all(_is_number(x) for x in value):
            raise self.fail("f_samples", "f_samples must be a non-empty list of numbers")
        return [float(x) for x in value]

    def theta_matrix(self) -> list[list[Phase]] | None:
        value = self.table.get("theta_matrix")
        if value is None:
            return None
        try:
            if not isinstance(value, list):
                raise TypeError(value)
            return [[_phase(x) for x in row] for row in value]
        except (TypeError, ValueError, ZeroDivisionError) as err:
            raise self.fail("theta_matrix", "theta_matrix rows must hold numbers or fractions like \"1/3\"") from err


def _validate(scenario: Scenario, reader: _Reader) -> None:
    fail = reader.fail
    if scenario.model not in constants.MODEL_OPTIONS:
        raise fail("model", f"unknown model {scenario.model!r}; expected one of {constants.MODEL_OPTIONS}")
    if scenario.n < 1:
        raise fail("n", f"n must be at least 1, got {scenario.n}")
    if scenario.K < 2:  # noqa: PLR2004
        raise fail("K", f"K must be at least 2, got {scenario.K}")
    if scenario.N < constants.MIN_WARPED_POINTS:
        raise fail("N", f"N must be at least {constants.MIN_WARPED_POINTS}, got {scenario.N}")
    if scenario.refinements < 1:
        raise fail("refinements", f"refinements must be at least 1, got {scenario.refinements}")
    if not 0 < scenario.stability_band < 1:
        raise fail("stability_band", "stability_band must lie in (0, 1)")
    if max(abs(x) for x in scenario.ell_range) > scenario.K:
        raise fail("ell_range", f"ell_range {list(scenario.ell_range)} leaves the window |l| <= {scenario.K}")
    if scenario.f_samples is None and scenario.profile not in PROFILE_REGISTRY:
        raise fail("profile", f"unknown profile {scenario.profile!r}; expected one of {constants.PROFILE_OPTIONS}")
    if scenario.f_samples is None:
        accepted = set(inspect.signature(PROFILE_REGISTRY[scenario.profile]).parameters) - {"s"}
        for name in scenario.profile_params:
            if name not in accepted:
                raise fail(_PROFILE_PREFIX + name, f"profile {scenario.profile!r} takes no parameter {name!r}")
    if scenario.model == "nc_torus" and scenario.theta_matrix is None:
        raise fail("model", "nc_torus needs a theta_matrix")
    if scenario.theta_matrix is not None:
        try:
            build_nc_torus(scenario.rank, scenario.theta_matrix, 1)
        except FactorisationError as err:
            raise fail("theta_matrix", str(err)) from err


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario.

    Raises:
    ------
        ScenarioError: On the first problem found, with the line of the offending key when known.

    Example:
    -------
        >>> parse_scenario('model = "torus"\\nn = 2\\nK = 3\\n').rank
        2

    """
    table = _decode(text)
    reader = _Reader(text, table)
    reader.check_types()
    fields: dict[str, object] = {
        key: value
        for key, value in table.items()
        if key in _INT_KEYS | _FLOAT_KEYS | _STRING_KEYS | {"poles"} and not key.startswith(_PROFILE_PREFIX)
    }
    if "output" in fields:
        fields["output"] = Path(str(fields["output"]))
    profile_params = {
        key.removeprefix(_PROFILE_PREFIX): float(value)  # type: ignore[arg-type]
        for key, value in table.items()
        if key.startswith(_PROFILE_PREFIX)
    }
    if profile_params:
        fields["profile_params"] = profile_params
    for key, value in (
        ("ell_range", reader.ell_range()),
        ("checks", reader.checks()),
        ("f_samples", reader.f_samples()),
        ("theta_matrix", reader.theta_matrix()),
    ):
        if value is not None:
            fields[key] = value
    scenario = Scenario(**fields)  # type: ignore[arg-type]
    _validate(scenario, reader)
    logger.debug("Parsed scenario: %s", scenario)
    return scenario


def load_scenario(path: Path) -> Scenario:
    """Read and parse a scenario file.

    Raises:
    ------
        ScenarioError: If the file cannot be read or does not validate.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        msg = f"cannot read scenario {path}: {err}"
        raise ScenarioError(msg) from err
    return parse_scenario(text)


def override(scenario: Scenario, **changes: object) -> Scenario:
    """Apply command-line overrides, ignoring unset ones, and validate again."""
    changes = {key: value for key, value in changes.items() if value is not None}
    if not changes:
        return scenario
    updated = dataclasses.replace(scenario, **changes)  # type: ignore[arg-type]
    _validate(updated, _Reader("", {}))
    return updated
