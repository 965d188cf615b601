"""Noncommutative torus generators and the theta-deformation of an equivariant model.

The deformed Hilbert space is spanned by xi_k (x) delta_(-k), the collapsed picture of
H (x) l^2(Z^n). The intertwiner u sends xi_k to xi_k (x) U^(-k) delta_0, so on sector k it is the
scalar phase of U^(-k) delta_0 against delta_(-k). An algebra element a_chi acts as a_chi (x) U^(-chi),
which in the collapsed picture multiplies each block by a regular-representation phase.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from errors import DimensionError, PreconditionError
from graded_core import GradedMatrix
from sectors import Character, LazyBlocks, SectorOperator, SectorSpace, TruncationWindow, compose

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from numpy.typing import NDArray

    from models import AlgebraSample, EquivariantModel, MetricData
    from orbit_space import OrbitSpaceModel

logger = logging.getLogger(__name__)

Phase = Fraction | float

# Rational detection for theta entries given as floats
_MAX_DENOMINATOR = 10**6
_RATIONAL_TOL = 1e-14


def exact_phase(value: float | Fraction | str) -> Phase:
    """A theta entry as an exact fraction when it is (numerically) rational, else as a float.

    Example:
    -------
        >>> exact_phase(0.5)
        Fraction(1, 2)
        >>> exact_phase("1/3")
        Fraction(1, 3)

    """
    if isinstance(value, Fraction | int | str):
        return Fraction(value)
    candidate = Fraction(value).limit_denominator(_MAX_DENOMINATOR)
    return candidate if abs(float(candidate) - value) <= _RATIONAL_TOL else float(value)


def turn(exponent: Phase) -> complex:
    """exp(2 pi i x), reducing exact exponents mod 1 first."""
    return complex(np.exp(2j * np.pi * float(exponent % 1)))


@dataclasses.dataclass(frozen=True, eq=False)
class NCTorusGenerators:
    """Regular representation of the noncommutative torus on l^2(Z^n), truncated to a window.

    U_j delta_p = exp(2 pi i sum_i L_ji p_i) delta_(p + e_j) with L_ji = theta_ji for j > i and 0
    otherwise, which gives U_j U_k = exp(2 pi i theta_jk) U_k U_j.
    """

    n: int
    theta: tuple[tuple[Phase, ...], ...]
    window: TruncationWindow

    def lower(self, j: int, i: int) -> Phase:
        """Strictly lower triangular part of theta."""
        return self.theta[j][i] if j > i else 0

    def exponent(self, j: int, p: Character) -> Phase:
        """Phase exponent of U_j at delta_p."""
        return sum((self.lower(j, i) * p.k[i] for i in range(self.n)), start=Fraction(0))

    def step(self, j: int, power: int, p: Character) -> tuple[Phase, Character]:
        """U_j^power delta_p as (exponent, target)."""
        unit = Character.unit(self.n, j + 1)
        total: Phase = Fraction(0)
        for _ in range(abs(power)):
            if power > 0:
                total += self.exponent(j, p)
                p = p + unit
            else:
                p = p - unit
                total -= self.exponent(j, p)
        return total, p

    def apply_word(self, k: Character, p: Character) -> tuple[Phase, Character]:
        """U^k delta_p with U^k = U_1^(k_1) ... U_n^(k_n), as (exponent, target)."""
        total: Phase = Fraction(0)
        for j in reversed(range(self.n)):
            exponent, p = self.step(j, k.k[j], p)
            total += exponent
        return total, p

    @functools.cached_property
    def space(self) -> SectorSpace:
        """One dimension per lattice point."""
        return SectorSpace.uniform(self.window, 1)

    @functools.cached_property
    def unitaries(self) -> tuple[SectorOperator, ...]:
        """U_1 .. U_n as shift-e_j sector operators."""
        return tuple(
            SectorOperator.from_function(
                self.space,
                Character.unit(self.n, j + 1),
                lambda p, j=j: GradedMatrix(np.array([[turn(self.exponent(j, p))]]), 1, 0),
            )
            for j in range(self.n)
        )

    def relation_holds_exactly(self) -> bool:
        """Check U_j U_k = exp(2 pi i theta_jk) U_k U_j at every window point, exactly for rational theta."""
        units = [Character.unit(self.n, j + 1) for j in range(self.n)]
        for p in self.window.characters():
            for j in range(self.n):
                for k in range(j + 1, self.n):
                    jk = self.exponent(k, p) + self.exponent(j, p + units[k])
                    kj = self.exponent(j, p) + self.exponent(k, p + units[j])
                    defect = (jk - kj - self.theta[j][k]) % 1
                    if isinstance(defect, Fraction):
                        if defect:
                            return False
                    elif min(defect, 1 - defect) > _RATIONAL_TOL:
                        return False
        return True

    def relation_residual(self) -> float:
        """Largest |U_j U_k - exp(2 pi i theta_jk) U_k U_j| entry on the window, in floating point."""
        worst = 0.0
        for j in range(self.n):
            for k in range(j + 1, self.n):
                uj, uk = self.unitaries[j], self.unitaries[k]
                left = compose(uj, uk)
                right = compose(uk, uj).scale(turn(self.theta[j][k]))
                for key, block in left.blocks.items():
                    if key in right.blocks:
                        worst = max(worst, (block - right.blocks[key]).max_abs())
        return worst

    def unitarity_defect(self) -> float:
        """Largest deviation of U_j* U_j from the identity on the blocks present."""
        worst = 0.0
        for u in self.unitaries:
            for block in u.blocks.values():
                worst = max(worst, float(abs(abs(block.entries[0, 0]) - 1)))
        return worst


def _as_matrix(theta: Sequence[Sequence[float | Fraction | str]] | NDArray[np.float64]) -> list[list[Phase]]:
    return [[exact_phase(x if isinstance(x, Fraction | str) else float(x)) for x in row] for row in theta]


def build_nc_torus(
    n: int,
    theta: Sequence[Sequence[float | Fraction | str]] | NDArray[np.float64],
    K: int,
) -> NCTorusGenerators:
    """Noncommutative torus generators for a skew-symmetric theta.

    Raises:
    ------
        DimensionError: If theta is not n x n.
        PreconditionError: If theta is not skew-symmetric.
    """
    matrix = _as_matrix(theta)
    if len(matrix) != n or any(len(row) != n for row in matrix):
        msg = f"theta matrix must be {n}x{n}"
        raise DimensionError(msg)
    for j in range(n):
        for k in range(n):
            total = matrix[j][k] + matrix[k][j]
            if abs(float(total)) > _RATIONAL_TOL:
                msg = f"theta matrix skew-symmetry violated at ({j + 1}, {k + 1})"
                raise PreconditionError(msg)
    return NCTorusGenerators(n, tuple(tuple(row) for row in matrix), TruncationWindow(K, n))


def _rephase(op: SectorOperator, phase: Callable[[Character, Character], complex]) -> SectorOperator:
    blocks = op.blocks
    rephased = LazyBlocks(list(blocks), lambda key: blocks[key].scale(phase(*key)))
    return SectorOperator(op.space, rephased, op.parity, op.truncation_loss)


@dataclasses.dataclass(frozen=True, eq=False)
class DeformedModel:
    """Theta-deformation of an equivariant model, in the collapsed picture.

    Operators of the base model are conjugated by the per-sector phase u; the algebra is
    represented through ``represent``.
    """

    base: EquivariantModel
    generators_nc: NCTorusGenerators

    @property
    def theta(self) -> tuple[tuple[Phase, ...], ...]:
        """Deformation matrix."""
        return self.generators_nc.theta

    @property
    def name(self) -> str:
        """Name of the underlying model."""
        return self.base.name

    @property
    def commutator_sign(self) -> int:
        """Sign convention of the underlying model."""
        return self.base.commutator_sign

    @property
    def rank(self) -> int:
        """Dimension of the acting torus."""
        return self.base.rank

    @property
    def window(self) -> TruncationWindow:
        """Character window."""
        return self.base.window

    @property
    def space(self) -> SectorSpace:
        """Sector space of the underlying model."""
        return self.base.space

    @property
    def orbit_grid(self) -> NDArray[np.float64]:
        """Orbit grid of the underlying model."""
        return self.base.orbit_grid

    @property
    def orbit_interval(self) -> tuple[float, float] | None:
        """Orbit coordinate range of the underlying model."""
        return self.base.orbit_interval

    @property
    def periodic(self) -> bool:
        """Whether the orbit coordinate is periodic."""
        return self.base.periodic

    @functools.cached_property
    def phases(self) -> dict[Character, complex]:
        """u on each sector: the phase of U^(-k) delta_0 against delta_(-k)."""
        zero = Character.zero(self.rank)
        phases = {}
        for k in self.window.characters():
            exponent, target = self.generators_nc.apply_word(-k, zero)
            if target != -k:
                msg = f"word for sector {k.label()} did not land on delta_(-k)"
                raise DimensionError(msg)
            phases[k] = turn(exponent)
        return phases

    def u(self, k: Character) -> complex:
        """Phase of the intertwiner on sector k."""
        return self.phases[k]

    def rho(self, chi: Character, k: Character) -> complex:
        """<delta_(-k-chi), U^(-chi) delta_(-k)>."""
        exponent, _ = self.generators_nc.apply_word(-chi, -k)
        return turn(exponent)

    def conjugate(self, op: SectorOperator) -> SectorOperator:
        """u o op o u*."""
        return _rephase(op, lambda shift, source: self.u(source + shift) * self.u(source).conjugate())

    @functools.cached_property
    def dirac(self) -> SectorOperator:
        """D_theta = u D u*."""
        return self.conjugate(self.base.dirac)

    def generators(self) -> tuple[SectorOperator, ...]:
        """Torus generators, conjugated."""
        return tuple(self.conjugate(a) for a in self.base.generators())

    def metric(self) -> MetricData:
        """The metric is unchanged."""
        return self.base.metric()

    def clifford_flat(self) -> tuple[SectorOperator, ...]:
        """Clifford data, conjugated."""
        return tuple(self.conjugate(c) for c in self.base.clifford_flat())

    def connection(self) -> tuple[SectorOperator, ...]:
        """Connection, conjugated."""
        return tuple(self.conjugate(c) for c in self.base.connection())

    def pointwise(self, values: NDArray[np.generic]) -> SectorOperator:
        """Fixed-point functions, conjugated."""
        return self.conjugate(self.base.pointwise(values))

    def represent(self, sample: AlgebraSample) -> SectorOperator:
        """psi(a_chi) = a_chi (x) U^(-chi) in the collapsed picture."""
        return _rephase(self.base.multiplication(sample), self.rho)

    def multiplication(self, sample: AlgebraSample) -> SectorOperator:
        """The deformed algebra acts through ``represent``."""
        return self.represent(sample)

    def orbit_space(self) -> OrbitSpaceModel:
        """Orbit space of the underlying model."""
        return self.base.orbit_space()

    def refine(self) -> DeformedModel:
        """Refine the underlying model and deform again."""
        return DeformedModel(self.base.refine(), self.generators_nc)

    def metadata(self) -> dict[str, object]:
        """Report metadata with the deformation matrix."""
        return {**self.base.metadata(), "theta": [[str(x) for x in row] for row in self.theta]}

    def __getattr__(self, item: str) -> object:
        """Model-specific attributes come from the underlying model."""
        if item in {"base", "generators_nc"}:
            raise AttributeError(item)
        return getattr(self.base, item)


def deform(
    model: EquivariantModel,
    theta: Sequence[Sequence[float | Fraction | str]] | NDArray[np.float64],
) -> DeformedModel:
    """Theta-deform a model whose torus rank matches theta."""
    generators = build_nc_torus(model.rank, theta, model.window.K)
    logger.debug("Deforming %s with theta=%s", model.name, generators.theta)
    return DeformedModel(model, generators)


def twisted_relation_residual(model: DeformedModel, sample_j: AlgebraSample, sample_k: AlgebraSample) -> float:
    """Largest deviation from psi(a_j) psi(a_k) = exp(2 pi i theta_jk) psi(a_k) psi(a_j).

    The samples must carry unit characters e_j and e_k with commuting coefficient functions.
    """
    j = sample_j.character.k.index(1)
    k = sample_k.character.k.index(1)
    a_j, a_k = model.represent(sample_j), model.represent(sample_k)
    left = compose(a_j, a_k)
    right = compose(a_k, a_j).scale(turn(model.theta[j][k]))
    worst = 0.0
    for key, block in left.blocks.items():
        if key in right.blocks:
            worst = max(worst, (block - right.blocks[key]).max_abs())
    return worst
