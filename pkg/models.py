"""Desk-scale torus-equivariant spectral triples.

Every model exposes the same surface, described by ``EquivariantModel``: a sector space, the Dirac
operator as a shift-0 sector operator, the torus generators A_j, the orbit metric with its Clifford
data, multiplication by algebra samples and a finite model of the orbit space. The condition
checkers in ``factor_check`` work only through this surface.

Sector blocks act on spinor fields sampled on an orbit-space grid and are laid out spinor-major, so
the even spinor components come first and the grading stays block diagonal.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from typing import TYPE_CHECKING, ClassVar, Protocol

import numpy as np
from scipy import sparse

import constants
import orbit_space
from errors import ConfigurationError, MetricError, PreconditionError
from graded_core import (
    GradedMatrix,
    Parity,
    clifford_generator_matrix,
    dense,
    graded_tensor,
    inverse_sqrt_spd,
    omega,
    sparse_diagonal,
    spinor_rep,
)
from sectors import (
    Character,
    LazyBlocks,
    SectorOperator,
    SectorSpace,
    SectorVector,
    TruncationWindow,
    restrict_to_sector,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from numpy.typing import NDArray

    from graded_core import SpinorRep
    from orbit_space import OrbitSpaceModel
    from profiles import Profile

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class AlgebraSample:
    """Algebra element a(x) times the character ``character``, with a(x) a smooth bump in the orbit coordinate.

    The bump is exp(1 - 1/(1 - r^2)) with r = (x - centre) / half_width, so it vanishes outside
    (centre - half_width, centre + half_width) and has sup norm 1.

    Examples
    --------
        >>> sample = AlgebraSample(Character.of(1), centre=np.pi / 2, half_width=np.pi / 6)
        >>> float(sample.values(np.array([np.pi / 2]))[0])
        1.0

    """

    character: Character
    centre: float
    half_width: float

    def values(self, x: NDArray[np.float64], period: float | None = None) -> NDArray[np.float64]:
        """Bump values on the grid ``x``; distances are wrapped when ``period`` is given."""
        distance = np.asarray(x, dtype=float) - self.centre
        if period is not None:
            distance = (distance + period / 2) % period - period / 2
        r = distance / self.half_width
        out = np.zeros_like(r)
        inside = np.abs(r) < 1
        out[inside] = np.exp(1 - 1 / (1 - r[inside] ** 2))
        return out

    def require_support(self, lo: float, hi: float) -> None:
        """Reject bumps whose support reaches the ends of the orbit interval.

        Raises:
        ------
            PreconditionError: If the support is not compactly contained in (lo, hi).
        """
        if self.centre - self.half_width <= lo or self.centre + self.half_width >= hi:
            msg = (
                f"sample around {self.centre:g} with half-width {self.half_width:g} is not compactly"
                f" supported in ({lo:g}, {hi:g})"
            )
            raise PreconditionError(msg)


@dataclasses.dataclass(frozen=True, eq=False)
class MetricData:
    """Orbit Gram matrices h(x) = (g(X_r, X_j))(x) on the orbit-space grid, shape (points, n, n)."""

    gram: NDArray[np.float64]

    @functools.cached_property
    def normaliser(self) -> NDArray[np.float64]:
        """W(x) = h(x)^(-1/2), pointwise."""
        return np.stack([inverse_sqrt_spd(h) for h in self.gram])

    @functools.cached_property
    def inverse(self) -> NDArray[np.float64]:
        """h^(-1)(x), pointwise."""
        return np.linalg.inv(self.gram)

    @property
    def normaliser_min_eigenvalue(self) -> float:
        """Smallest eigenvalue of W over the whole grid."""
        return float(np.linalg.eigvalsh(self.normaliser).min())


class EquivariantModel(Protocol):
    """Surface shared by every model."""

    name: str
    commutator_sign: int

    @property
    def rank(self) -> int: ...  # noqa: D102

    @property
    def window(self) -> TruncationWindow: ...  # noqa: D102

    @property
    def space(self) -> SectorSpace: ...  # noqa: D102

    @property
    def dirac(self) -> SectorOperator: ...  # noqa: D102

    @property
    def orbit_grid(self) -> NDArray[np.float64]: ...  # noqa: D102

    @property
    def orbit_interval(self) -> tuple[float, float] | None: ...  # noqa: D102

    @property
    def periodic(self) -> bool: ...  # noqa: D102

    def generators(self) -> tuple[SectorOperator, ...]: ...  # noqa: D102

    def metric(self) -> MetricData: ...  # noqa: D102

    def clifford_flat(self) -> tuple[SectorOperator, ...]: ...  # noqa: D102

    def connection(self) -> tuple[SectorOperator, ...]: ...  # noqa: D102

    def pointwise(self, values: NDArray[np.generic]) -> SectorOperator: ...  # noqa: D102

    def multiplication(self, sample: AlgebraSample) -> SectorOperator: ...  # noqa: D102

    def orbit_space(self) -> OrbitSpaceModel: ...  # noqa: D102

    def refine(self) -> EquivariantModel: ...  # noqa: D102

    def metadata(self) -> dict[str, object]: ...  # noqa: D102


def field_block(spin: GradedMatrix, grid_matrix: NDArray[np.generic] | sparse.csr_array) -> GradedMatrix:
    """Spinor matrix tensored with a matrix acting on grid samples, spinor-major layout.

    A one-dimensional ``grid_matrix`` is read as a diagonal of pointwise values. Blocks of dimension
    ``constants.SPARSE_MIN_DIM`` or more are stored sparse.
    """
    if not sparse.issparse(grid_matrix):
        grid_matrix = np.asarray(grid_matrix)
    points = grid_matrix.shape[0]
    even_dim, odd_dim = spin.even_dim * points, spin.odd_dim * points
    if spin.dim * points >= constants.SPARSE_MIN_DIM:
        grid = sparse_diagonal(grid_matrix) if grid_matrix.ndim == 1 else grid_matrix
        data = sparse.csr_array(sparse.kron(spin.entries, grid, format="csr"))
        return GradedMatrix(data, even_dim, odd_dim, spin.parity)
    grid = np.diag(grid_matrix) if grid_matrix.ndim == 1 else dense(grid_matrix)
    return GradedMatrix(np.kron(spin.entries, grid), even_dim, odd_dim, spin.parity)


class GridModel:
    """Assembly shared by models whose sectors are spinor fields on an orbit-space grid."""

    window: TruncationWindow
    periodic: ClassVar[bool] = False

    @property
    def spin_identity(self) -> GradedMatrix:
        """Identity on the spinor fibre."""
        raise NotImplementedError

    @property
    def orbit_grid(self) -> NDArray[np.float64]:
        """Orbit-space sample points."""
        raise NotImplementedError

    @property
    def orbit_interval(self) -> tuple[float, float] | None:
        """Orbit coordinate range, or None when the orbit space is a point."""
        return None

    @property
    def rank(self) -> int:
        """Dimension of the acting torus."""
        return self.window.n

    @functools.cached_property
    def space(self) -> SectorSpace:
        """Every sector carries spinor fields on the whole grid."""
        points = self.orbit_grid.size
        spin = self.spin_identity
        return SectorSpace.uniform(self.window, spin.even_dim * points, spin.odd_dim * points)

    def _constant(self, block: GradedMatrix) -> SectorOperator:
        zero = Character.zero(self.rank)
        return SectorOperator.from_function(self.space, zero, lambda _: block, block.parity or Parity.EVEN)

    def _per_sector(self, block: Callable[[Character], GradedMatrix], parity: Parity) -> SectorOperator:
        zero = Character.zero(self.rank)
        return SectorOperator.from_function(self.space, zero, block, parity, lazy=True)

    def generators(self) -> tuple[SectorOperator, ...]:
        """A_j acting as 2 pi k_j on sector k."""
        eye = GradedMatrix.identity(*self.space.dims(Character.zero(self.rank)))
        return tuple(
            self._per_sector(lambda k, j=j: eye.scale(constants.TWO_PI * k.k[j]), Parity.EVEN) for j in range(self.rank)
        )

    def pointwise(self, values: NDArray[np.generic]) -> SectorOperator:
        """Multiplication by a function sampled on the orbit grid; diagonal in the grid basis."""
        return self._constant(field_block(self.spin_identity, np.asarray(values, dtype=complex)))

    def multiplication(self, sample: AlgebraSample) -> SectorOperator:
        """Multiplication by a homogeneous algebra element; shift = its character."""
        interval = self.orbit_interval
        if interval is None:
            values = np.ones(self.orbit_grid.size)
        else:
            if not self.periodic:
                sample.require_support(*interval)
            period = interval[1] - interval[0] if self.periodic else None
            values = sample.values(self.orbit_grid, period)
        block = field_block(self.spin_identity, values.astype(complex))
        return SectorOperator.from_function(self.space, sample.character, lambda _: block)


@dataclasses.dataclass(frozen=True, eq=False)
class TorusDiracModel(GridModel):
    """Flat torus T^n acting on itself; the orbit space is a single point.

    Attributes
    ----------
        n: Torus dimension.
        window: Character window.
        rep: Spinor representation supplying the self-adjoint generators Gamma_j.
        commutator_sign: Overall sign between [D, chi_k] and 2 pi i sum k_j chi_k c(dt^j).

    """

    n: int
    window: TruncationWindow
    rep: SpinorRep
    name: str = "torus"
    commutator_sign: int = -1

    @property
    def spin_identity(self) -> GradedMatrix:
        """Identity on the spinors."""
        first = self.rep.gamma[0]
        return GradedMatrix.identity(first.even_dim, first.odd_dim)

    @property
    def orbit_grid(self) -> NDArray[np.float64]:
        """The single orbit."""
        return np.zeros(1)

    @functools.cached_property
    def dirac(self) -> SectorOperator:
        """2 pi sum k_j Gamma_j on sector k."""
        parity = self.rep.gamma[0].parity or Parity.EVEN

        def block(k: Character) -> GradedMatrix:
            total = GradedMatrix.zeros(self.spin_identity.even_dim, self.spin_identity.odd_dim, parity)
            for kj, gamma in zip(k.k, self.rep.gamma, strict=True):
                total = total + gamma.scale(constants.TWO_PI * kj)
            return total

        return self._per_sector(block, parity)

    def metric(self) -> MetricData:
        """The flat metric: h = identity."""
        return MetricData(np.eye(self.n)[np.newaxis])

    def clifford_flat(self) -> tuple[SectorOperator, ...]:
        """c(dt^r) = i Gamma_r."""
        return tuple(self._constant(gamma.scale(1j)) for gamma in self.rep.gamma)

    def connection(self) -> tuple[SectorOperator, ...]:
        """The spin connection is trivial, so the covariant derivative along t_j is -2 pi i k_j."""
        eye = GradedMatrix.identity(*self.space.dims(Character.zero(self.n)))
        return tuple(
            self._per_sector(lambda k, j=j: eye.scale(-1j * constants.TWO_PI * k.k[j]), Parity.EVEN)
            for j in range(self.n)
        )

    def frame_sections(self) -> list[SectorVector]:
        """Constant spinor frame: the basis vectors of sector 0."""
        zero = Character.zero(self.n)
        sections = []
        for r in range(self.spin_identity.dim):
            vector = SectorVector.zeros(self.space)
            vector.components[zero][r] = 1.0
            sections.append(vector)
        return sections

    def orbit_space(self) -> OrbitSpaceModel:
        """A point."""
        return orbit_space.point()

    def refine(self) -> TorusDiracModel:
        """No grid to refine."""
        return self

    def metadata(self) -> dict[str, object]:
        """Report metadata."""
        return {"model": self.name, "n": self.n, "K": self.window.K, "commutator_sign": self.commutator_sign}


def periodic_difference(points: int, spacing: float) -> sparse.csr_array:
    """Antisymmetric central difference on a periodic grid."""
    weight = 1 / (2 * spacing)
    stencil = sparse.diags(
        [-weight, weight, weight, -weight],
        [-1, 1, -(points - 1), points - 1],
        shape=(points, points),
        format="csr",
    )
    return sparse.csr_array(stencil)


@dataclasses.dataclass(frozen=True, eq=False)
class WarpedTorusModel(GridModel):
    """Circle S^1_s with an n-torus fibre, metric ds^2 + f(s)^2 sum dt_j^2, in the half-density frame.

    The Clifford generators are Gamma_1..Gamma_n along the fibre and Gamma_s along the base; when
    n + 1 is odd they are ungraded and the model is doubled by ``double_odd``. The spin connection
    along the orbits is d/dt_j + (f'/2) Gamma_j Gamma_s.

    ``lift`` is carried into the run metadata only. The fibre torus acts freely, so every lift gives
    the same sector labels and the same operators.
    """

    profile: Profile
    N: int
    window: TruncationWindow
    lift: int = 0
    name: str = "warped_torus"
    commutator_sign: int = -1
    periodic: ClassVar[bool] = True

    @functools.cached_property
    def rep(self) -> SpinorRep:
        """Spinors for the fibre generators followed by the base generator."""
        return spinor_rep(self.window.n + 1)

    @property
    def spin_identity(self) -> GradedMatrix:
        """Identity on the spinors."""
        first = self.rep.gamma[0]
        return GradedMatrix.identity(first.even_dim, first.odd_dim)

    @functools.cached_property
    def orbit_grid(self) -> NDArray[np.float64]:
        """s_i = i / N."""
        return np.arange(self.N) / self.N

    @property
    def orbit_interval(self) -> tuple[float, float]:
        """The base circle."""
        return (0.0, 1.0)

    @functools.cached_property
    def f(self) -> NDArray[np.float64]:
        """Orbit length profile on the grid."""
        values = self.profile.sample(self.N)
        if np.any(values <= 0):
            msg = f"orbit length profile must be positive, minimum {values.min():g}"
            raise MetricError(msg)
        return values

    @functools.cached_property
    def derivative(self) -> sparse.csr_array:
        """Periodic central difference in s."""
        return periodic_difference(self.N, 1.0 / self.N)

    @functools.cached_property
    def f_prime(self) -> NDArray[np.float64]:
        """Discrete derivative of the profile."""
        return self.derivative @ self.f

    def metric(self) -> MetricData:
        """h_{rj}(s) = f(s)^2 delta_rj."""
        return self._metric

    @functools.cached_property
    def _metric(self) -> MetricData:
        return MetricData(self.f[:, np.newaxis, np.newaxis] ** 2 * np.eye(self.window.n))

    @functools.cached_property
    def dirac(self) -> SectorOperator:
        """sum_j 2 pi k_j f^(-1) Gamma_j + i delta_s Gamma_s on sector k."""
        fibre, base = self.rep.gamma[:-1], self.rep.gamma[-1]
        parity = base.parity or Parity.EVEN
        radial = field_block(base, 1j * self.derivative)
        orbit = [field_block(gamma, constants.TWO_PI / self.f) for gamma in fibre]

        def block(k: Character) -> GradedMatrix:
            total = radial
            for kj, term in zip(k.k, orbit, strict=True):
                if kj:
                    total = total + term.scale(kj)
            return total

        sectors = len(self.space.characters())
        logger.debug("Warped torus: N=%d, fibre rank %d, %d sectors", self.N, self.window.n, sectors)
        return self._per_sector(block, parity)

    def clifford_flat(self) -> tuple[SectorOperator, ...]:
        """c(X_r^flat) = sum_p h_rp c(dt^p) with c(dt^p) = (i/f) Gamma_p."""
        gram = self.metric().gram
        fibre = self.rep.gamma[:-1]
        result = []
        for r in range(self.window.n):
            terms = [field_block(gamma, 1j * gram[:, r, p] / self.f) for p, gamma in enumerate(fibre)]
            result.append(self._constant(functools.reduce(lambda a, b: a + b, terms)))
        return tuple(result)

    def connection(self) -> tuple[SectorOperator, ...]:
        """Spin connection along X_j on sector k: -2 pi i k_j + (f'/2) Gamma_j Gamma_s."""
        base = self.rep.gamma[-1]
        eye = GradedMatrix.identity(*self.space.dims(Character.zero(self.rank)))
        result = []
        for j, gamma in enumerate(self.rep.gamma[:-1]):
            endomorphism = field_block(gamma @ base, self.f_prime / 2)
            result.append(
                self._per_sector(
                    lambda k, j=j, e=endomorphism: e + eye.scale(-1j * constants.TWO_PI * k.k[j]),
                    Parity.EVEN,
                ),
            )
        return tuple(result)

    def orbit_space(self) -> OrbitSpaceModel:
        """Free action: the orbit space is the base circle."""
        return orbit_space.circle()

    def refine(self) -> WarpedTorusModel:
        """Double the base grid."""
        return dataclasses.replace(self, N=2 * self.N)

    def metadata(self) -> dict[str, object]:
        """Report metadata."""
        return {
            "model": self.name,
            "fibre_rank": self.window.n,
            "N": self.N,
            "K": self.window.K,
            "lift": self.lift,
            "profile": self.profile.describe(),
            "commutator_sign": self.commutator_sign,
            "connection_term": "(f'/2) Gamma_j Gamma_s",
        }


def _lift(op: SectorOperator, space: SectorSpace, factor: GradedMatrix) -> SectorOperator:
    blocks = op.blocks
    lifted = LazyBlocks(list(blocks), lambda key: graded_tensor(blocks[key], factor))
    parity = None if op.parity is None else op.parity + (factor.parity or Parity.EVEN)
    return SectorOperator(space, lifted, parity, op.truncation_loss)


@dataclasses.dataclass(frozen=True, eq=False)
class DoubledModel:
    """Even model (A (x) Cl_1, H (x) C^2, D (x) omega) built from an ungraded one.

    Operators of odd Clifford degree (D, c(X^flat)) are lifted as X (x) omega and the rest as
    X (x) 1. The Cl_1 generator acts as 1 (x) ((0,1),(1,0)).
    """

    base: EquivariantModel

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
    def space(self) -> SectorSpace:
        """H_k (x) C^2 with H_k even and odd."""
        dims = {chi: (self.base.space.dims(chi)[0],) * 2 for chi in self.window.characters()}
        return SectorSpace(self.window, dims)

    def _odd(self, op: SectorOperator) -> SectorOperator:
        return _lift(op, self.space, omega())

    def _even(self, op: SectorOperator) -> SectorOperator:
        return _lift(op, self.space, GradedMatrix.identity(1, 1))

    @functools.cached_property
    def dirac(self) -> SectorOperator:
        """D (x) omega."""
        return self._odd(self.base.dirac)

    def generators(self) -> tuple[SectorOperator, ...]:
        """A_j (x) 1."""
        return tuple(self._even(a) for a in self.base.generators())

    def metric(self) -> MetricData:
        """Metric of the underlying model."""
        return self.base.metric()

    def clifford_flat(self) -> tuple[SectorOperator, ...]:
        """c(X^flat) (x) omega."""
        return tuple(self._odd(c) for c in self.base.clifford_flat())

    def connection(self) -> tuple[SectorOperator, ...]:
        """Connection (x) 1."""
        return tuple(self._even(c) for c in self.base.connection())

    def pointwise(self, values: NDArray[np.generic]) -> SectorOperator:
        """Function multiplication (x) 1."""
        return self._even(self.base.pointwise(values))

    def multiplication(self, sample: AlgebraSample) -> SectorOperator:
        """Algebra multiplication (x) 1."""
        return self._even(self.base.multiplication(sample))

    def clifford_action(self) -> SectorOperator:
        """The Cl_1 generator 1 (x) ((0,1),(1,0))."""
        zero = Character.zero(self.rank)
        eye = GradedMatrix.identity(*self.base.space.dims(zero))
        block = graded_tensor(eye, clifford_generator_matrix())
        return SectorOperator.from_function(self.space, zero, lambda _: block, Parity.ODD)

    def clifford_action_defect(self) -> float:
        """Largest entry of D e + e D over the window for the Cl_1 generator e."""
        action = self.clifford_action()
        worst = 0.0
        for chi in self.window.characters():
            d, e = restrict_to_sector(self.dirac, chi), restrict_to_sector(action, chi)
            worst = max(worst, (d @ e + e @ d).max_abs())
        return worst

    def orbit_space(self) -> OrbitSpaceModel:
        """Orbit space of the underlying model."""
        return self.base.orbit_space()

    def refine(self) -> DoubledModel:
        """Refine the underlying model and double again."""
        return double_odd(self.base.refine())

    def metadata(self) -> dict[str, object]:
        """Report metadata, flagged as doubled."""
        return {**self.base.metadata(), "doubled": True, "clifford_action_defect": self.clifford_action_defect()}

    def __getattr__(self, item: str) -> object:
        """Model-specific attributes (profile, N, f, ...) come from the underlying model."""
        if item == "base":
            raise AttributeError(item)
        return getattr(self.base, item)


def double_odd(model: EquivariantModel) -> DoubledModel:
    """Double an ungraded model into an even one.

    Raises:
    ------
        PreconditionError: If the model is already graded.
    """
    if any(model.space.dims(chi)[1] for chi in model.window.characters()):
        msg = "double_odd needs an ungraded model; this one is already graded"
        raise PreconditionError(msg)
    logger.debug("Doubling ungraded %s model", model.name)
    return DoubledModel(model)


def build_torus(n: int, K: int) -> TorusDiracModel | DoubledModel:
    """Flat torus T^n; odd n is doubled.

    Raises:
    ------
        ConfigurationError: If n < 1 or K < 1.
    """
    if n < 1 or K < 1:
        msg = f"torus needs n >= 1 and K >= 1, got n={n}, K={K}"
        raise ConfigurationError(msg)
    model = TorusDiracModel(n, TruncationWindow(K, n), spinor_rep(n))
    return double_odd(model) if n % 2 else model


def build_warped_torus(
    profile: Profile,
    N: int,
    K: int,
    lift: int = 0,
    fibre_rank: int = 1,
) -> WarpedTorusModel | DoubledModel:
    """Warped torus over a circle, doubled when the total dimension is odd.

    Raises:
    ------
        ConfigurationError: If N < 16, K < 2 or the fibre rank is below 1.
        MetricError: If the profile is not positive.
    """
    if N < constants.MIN_WARPED_POINTS or K < 2 or fibre_rank < 1:
        msg = f"warped torus needs N >= {constants.MIN_WARPED_POINTS}, K >= 2, fibre rank >= 1; got N={N}, K={K}"
        raise ConfigurationError(msg)
    model = WarpedTorusModel(profile, N, TruncationWindow(K, fibre_rank), lift)
    model.f  # noqa: B018
    return double_odd(model) if (fibre_rank + 1) % 2 else model


def _scale_rows(diagonal: GradedMatrix, other: GradedMatrix) -> GradedMatrix:
    return other.scale_rows(diagonal.diagonal())


def normalised_covectors(model: EquivariantModel) -> tuple[SectorOperator, ...]:
    """Clifford action of v_j = sum_r W^{rj} X_r^flat, the orthonormalised orbit covectors.

    Raises:
    ------
        MetricError: If the metric and its Clifford data do not match the torus rank.
    """
    normaliser = model.metric().normaliser
    flats = model.clifford_flat()
    if normaliser.shape[1:] != (model.rank, model.rank) or len(flats) != model.rank:
        msg = f"metric data of shape {normaliser.shape} does not match torus rank {model.rank}"
        raise MetricError(msg)
    zero = Character.zero(model.rank)
    parity = flats[0].parity or Parity.EVEN
    covectors = []
    for j in range(model.rank):
        weights = [model.pointwise(normaliser[:, r, j]) for r in range(model.rank)]

        def block(k: Character, weights: list[SectorOperator] = weights) -> GradedMatrix:
            terms = [
                _scale_rows(restrict_to_sector(w, k), restrict_to_sector(c, k))
                for w, c in zip(weights, flats, strict=True)
            ]
            return functools.reduce(lambda a, b: a + b, terms)

        covectors.append(SectorOperator.from_function(model.space, zero, block, parity, lazy=True))
    return tuple(covectors)


def clifford_eta(model: EquivariantModel) -> tuple[SectorOperator, ...]:
    """Self-adjoint Clifford generators eta(e_j) = -i c(v_j)."""
    return tuple(v.scale(-1j) for v in normalised_covectors(model))


def orbit_connection_norms(model: EquivariantModel) -> dict[Character, list[float]]:
    """Per-sector norms of the endomorphisms nabla_{X_j} + i A_j.

    These are sector-independent when the orbit connection differs from the torus generator by an
    endomorphism.
    """
    connections = model.connection()
    generators = model.generators()
    norms = {}
    for chi in model.window.characters():
        norms[chi] = [
            (restrict_to_sector(nabla, chi) + restrict_to_sector(a, chi).scale(1j)).norm()
            for nabla, a in zip(connections, generators, strict=True)
        ]
    return norms


def default_samples(model: EquivariantModel, *, fixed_points: bool = False) -> list[AlgebraSample]:
    """Bump samples at the standard orbit positions.

    With ``fixed_points`` only the trivial character is used; otherwise every non-trivial character
    with entries up to the sample bound that fits in the window.
    """
    interval = model.orbit_interval
    lo, hi = interval if interval is not None else (0.0, 1.0)
    width = hi - lo
    if fixed_points:
        characters = [Character.zero(model.rank)]
    else:
        bound = min(constants.SAMPLE_MAX_CHARACTER, model.window.K)
        characters = [chi for chi in model.window.characters() if any(chi.k) and chi.max_abs <= bound]
    return [
        AlgebraSample(chi, lo + centre * width, constants.SAMPLE_HALF_WIDTH * width)
        for chi in characters
        for centre in constants.SAMPLE_CENTRES
    ]
