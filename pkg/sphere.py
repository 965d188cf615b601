"""The 2-sphere with its rotation action, in reduced coordinates.

Sections of the spinor bundle with lift index k decompose by rotation character. On sector m the
upper spinor component carries phi-frequency k - m and the lower one k - m - 1. The unitary
F xi = sqrt(2 pi sin theta) (i f, g) takes the polar components (f, g) to reduced coordinates, where
the sector-m Dirac operator is

    T_m = -i delta_theta (x) omega - (k - m - 1/2) csc(theta) (x) c

on L^2((margin, pi - margin), d theta) (x) C^2 with Dirichlet conditions at the two grid ends.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse

import constants
import orbit_space
from errors import ConfigurationError, MetricError
from graded_core import GradedMatrix, Parity, clifford_generator_matrix, omega, sparse_diagonal, spectral_norm
from models import AlgebraSample, GridModel, MetricData, clifford_eta, field_block
from sectors import Character, SectorOperator, TruncationWindow, restrict_to_sector

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from orbit_space import OrbitSpaceModel

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class SphereModel(GridModel):
    """Sphere with lift index ``k_lift`` on a theta grid of N intervals between the pole margins.

    Attributes
    ----------
        k_lift: Lift index of the rotation action to the spinor bundle.
        N: Number of grid intervals; the N - 1 interior points carry the unknowns.
        window: Rotation characters kept.
        margin: Distance of the grid ends from the poles.
        punctured: Whether the poles are removed from the space.

    """

    k_lift: int
    N: int
    window: TruncationWindow
    margin: float
    punctured: bool = True
    name: str = "sphere"
    commutator_sign: int = 1

    @property
    def spin_identity(self) -> GradedMatrix:
        """Identity on C^2, upper component even."""
        return GradedMatrix.identity(1, 1)

    @property
    def spacing(self) -> float:
        """Grid spacing in theta."""
        return (np.pi - 2 * self.margin) / self.N

    @functools.cached_property
    def orbit_grid(self) -> NDArray[np.float64]:
        """Interior grid points theta_1 .. theta_(N-1)."""
        return self.margin + self.spacing * np.arange(1, self.N)

    @property
    def orbit_interval(self) -> tuple[float, float]:
        """Polar angle range."""
        return (0.0, float(np.pi))

    @functools.cached_property
    def csc(self) -> NDArray[np.float64]:
        """csc(theta) on the grid."""
        return 1 / np.sin(self.orbit_grid)

    @functools.cached_property
    def derivative(self) -> sparse.csr_array:
        """Antisymmetric central difference with Dirichlet ends."""
        points = self.N - 1
        weight = 1 / (2 * self.spacing)
        return sparse.csr_array(sparse.diags([-weight, weight], [-1, 1], shape=(points, points), format="csr"))

    def reduced_block(self, m: int) -> GradedMatrix:
        """T_m on the grid."""
        kinetic = field_block(omega(), -1j * self.derivative)
        potential = field_block(clifford_generator_matrix(), -(self.k_lift - m - 0.5) * self.csc)
        return kinetic + potential

    def polar_matrix(self, m: int) -> sparse.csr_array:
        """The polar-coordinate operator on the components (f, g) of sector m.

        f -> i dg/dtheta + i(k - m - 1) csc g + (i/2) cot(theta/2) g
        g -> i df/dtheta - i(k - m) csc f + (i/2) cot(theta/2) f
        """
        half_cot = 0.5 / np.tan(self.orbit_grid / 2)
        upper = 1j * (self.derivative + sparse_diagonal((self.k_lift - m - 1) * self.csc + half_cot))
        lower = 1j * (self.derivative + sparse_diagonal(-(self.k_lift - m) * self.csc + half_cot))
        return sparse.csr_array(sparse.bmat([[None, upper], [lower, None]], format="csr"))

    @functools.cached_property
    def _frame(self) -> NDArray[np.complex128]:
        """Diagonal of F: i sqrt(2 pi sin theta) on f, sqrt(2 pi sin theta) on g."""
        root = np.sqrt(constants.TWO_PI * np.sin(self.orbit_grid))
        return np.concatenate([1j * root, root.astype(complex)])

    def to_reduced(self, f: NDArray[np.generic], g: NDArray[np.generic]) -> NDArray[np.complex128]:
        """Apply F to polar components; extra trailing axes hold batches of vectors."""
        stacked = np.concatenate([f, g])
        frame = self._frame.reshape(-1, *([1] * (stacked.ndim - 1)))
        return frame * stacked

    def conjugated_polar_block(self, m: int) -> GradedMatrix:
        """F P_m F^(-1): the polar assembly expressed in reduced coordinates."""
        data = sparse_diagonal(self._frame) @ self.polar_matrix(m) @ sparse_diagonal(1 / self._frame)
        return GradedMatrix(sparse.csr_array(data), self.N - 1, self.N - 1, Parity.ODD)

    @functools.cached_property
    def dirac(self) -> SectorOperator:
        """Reduced Dirac operator, sector by sector."""
        logger.debug("Sphere: k=%d, N=%d, margin=%g", self.k_lift, self.N, self.margin)
        return self._per_sector(lambda k: self.reduced_block(k.k[0]), Parity.ODD)

    def metric(self) -> MetricData:
        """|X|^2 = (2 pi sin theta)^2 for the rotation generator X = 2 pi d/dphi."""
        return self._metric

    @functools.cached_property
    def _metric(self) -> MetricData:
        return MetricData((constants.TWO_PI * np.sin(self.orbit_grid))[:, np.newaxis, np.newaxis] ** 2)

    def clifford_flat(self) -> tuple[SectorOperator, ...]:
        """c(X^flat) = i |X| c in reduced coordinates."""
        length = constants.TWO_PI * np.sin(self.orbit_grid)
        return (self._constant(field_block(clifford_generator_matrix(), 1j * length)),)

    def connection(self) -> tuple[SectorOperator, ...]:
        """Not available in reduced coordinates.

        Raises:
        ------
            MetricError: Always.
        """
        msg = "the sphere model does not expose the spin connection along orbits"
        raise MetricError(msg)

    def orbit_space(self) -> OrbitSpaceModel:
        """[0, pi] with the poles as fixed points, or (0, pi) when punctured."""
        return orbit_space.interval(0.0, float(np.pi), self.window.characters(), include_ends=not self.punctured)

    def refine(self) -> SphereModel:
        """Double the grid and halve the pole margin."""
        return dataclasses.replace(self, N=2 * self.N, margin=self.margin / 2)

    def metadata(self) -> dict[str, object]:
        """Report metadata."""
        return {
            "model": self.name,
            "k_lift": self.k_lift,
            "N": self.N,
            "K": self.window.K,
            "margin": self.margin,
            "punctured": self.punctured,
            "commutator_sign": self.commutator_sign,
        }

    def condition2_analytic(self, sample: AlgebraSample, zeta: Character, resolution: int = 20001) -> float:
        """sup |csc(theta) (2j + 2l - 2k + 1) a(theta)| for a sample of character j at sector l."""
        theta = np.linspace(sample.centre - sample.half_width, sample.centre + sample.half_width, resolution)
        factor = 2 * sample.character.k[0] + 2 * zeta.k[0] - 2 * self.k_lift + 1
        return float(np.max(np.abs(factor * sample.values(theta) / np.sin(theta))))


def build_sphere(k_lift: int, N: int, K: int, margin: float, *, punctured: bool = True) -> SphereModel:
    """Sphere model with validated grid parameters.

    Raises:
    ------
        ConfigurationError: If N < 64, K < 2, the margin is outside (0, pi/8) or smaller than the grid spacing.
    """
    if N < constants.MIN_SPHERE_POINTS or K < 2:
        msg = f"sphere needs N >= {constants.MIN_SPHERE_POINTS} and K >= 2, got N={N}, K={K}"
        raise ConfigurationError(msg)
    if not 0 < margin < constants.MAX_SPHERE_MARGIN:
        msg = f"pole margin {margin:g} outside (0, pi/8)"
        raise ConfigurationError(msg)
    spacing = (np.pi - 2 * margin) / N
    if margin < spacing:
        msg = f"pole margin {margin:g} too small for grid spacing {spacing:.4g}"
        raise ConfigurationError(msg)
    return SphereModel(k_lift, N, TruncationWindow(K), margin, punctured)


def positivity_polynomial(n: int | NDArray[np.int_], k: int, ell: int) -> NDArray[np.float64]:
    """p(n) = 2n(n - k + l + 1/2)."""
    n = np.asarray(n, dtype=float)
    return 2 * n * (n - k + ell + 0.5)


@dataclasses.dataclass(frozen=True)
class PolynomialCase:
    """Where p(n) attains its integer minimum, split by the parity of k - l."""

    k: int
    ell: int
    minimiser: float
    branch: str
    candidates: tuple[int, int]
    integer_minimum: float
    closed_form_minimum: float

    @property
    def predicted_pass(self) -> bool:
        """p is non-negative on the integers."""
        return self.integer_minimum >= 0


def polynomial_case_analysis(k: int, ell: int) -> PolynomialCase:
    """Case analysis of the positivity polynomial for lift k and sector l.

    Example:
    -------
        >>> polynomial_case_analysis(0, 2).integer_minimum
        -3.0

    """
    d = k - ell
    if d % 2 == 0:
        branch, candidates = "even", (d // 2 - 1, d // 2)
    else:
        branch, candidates = "odd", ((d - 1) // 2, (d + 1) // 2)
    values = positivity_polynomial(np.array(candidates), k, ell)
    return PolynomialCase(
        k=k,
        ell=ell,
        minimiser=d / 2 - 0.25,
        branch=branch,
        candidates=candidates,
        integer_minimum=float(values.min()),
        closed_form_minimum=-(ell - k + 1) * (ell - k) / 2,
    )


def odd_obstruction(model: SphereModel, ell: int) -> dict[str, float]:
    """Norms of the components of the reduced operator at sector l along 1, c, omega and the grading.

    The c component is |k - l - 1/2| max csc(theta), never zero, so the operator is not of the
    doubled form D' (x) omega.
    """
    block = model.reduced_block(ell).data
    half = model.N - 1
    t11, t12 = block[:half, :half], block[:half, half:]
    t21, t22 = block[half:, :half], block[half:, half:]
    components = {
        "identity": (t11 + t22) / 2,
        "grading": (t11 - t22) / 2,
        "c": (t12 + t21) / 2,
        "omega": 1j * (t12 - t21) / 2,
    }
    norms = {name: spectral_norm(x) for name, x in components.items()}
    norms["c_expected"] = abs(model.k_lift - ell - 0.5) * float(model.csc.max())
    return norms


def sphere_angular_quadratic_form(
    model: SphereModel,
    ell: int,
    sector: int,
    f: NDArray[np.generic],
    g: NDArray[np.generic],
) -> float | NDArray[np.float64]:
    """<T xi, M xi> + <M xi, T xi> in angular units for polar components (f, g) at ``sector``.

    M is the product operator for sector ``ell``, built from the model's Clifford data; the result
    is divided by 2 pi so it matches 4 pi n (n - k + l + 1/2) int(|f|^2 + |g|^2) with n = sector - l.
    Columns of two-dimensional ``f`` and ``g`` are separate test pairs, giving one value each.
    """
    zeta = Character.of(sector)
    (eta,) = clifford_eta(model)
    product = restrict_to_sector(eta, zeta).scale(constants.TWO_PI * (sector - ell))
    xi = model.to_reduced(f, g)
    dirac_xi = model.reduced_block(sector).apply(xi)
    product_xi = product.apply(xi)
    # Both operators are self-adjoint, so the form is 2 Re <T xi, M xi>
    values = 2 * model.spacing * np.einsum("i...,i...->...", dirac_xi.conj(), product_xi).real / constants.TWO_PI
    return float(values) if np.ndim(values) == 0 else values


def assembly_discrepancy(model: SphereModel, m: int, xi: NDArray[np.complex128]) -> float:
    """Discrete L^2 norm of (F P_m F^(-1) - T_m) xi."""
    difference = (model.conjugated_polar_block(m) - model.reduced_block(m)).apply(xi)
    return float(np.sqrt(model.spacing * np.vdot(difference, difference).real))


@dataclasses.dataclass(frozen=True)
class ConvergenceStudy:
    """Polar against reduced discrepancies over a sequence of grids."""

    grid_sizes: tuple[int, ...]
    spacings: tuple[float, ...]
    discrepancies: tuple[float, ...]

    @property
    def order(self) -> float:
        """Least-squares slope of log2(discrepancy) against log2(spacing)."""
        slope, _ = np.polyfit(np.log2(self.spacings), np.log2(self.discrepancies), 1)
        return float(slope)


def assembly_convergence(
    k_lift: int,
    m: int,
    grid_sizes: tuple[int, ...] = (128, 256, 512),
    margin: float = 0.05,
    sample: AlgebraSample | None = None,
) -> ConvergenceStudy:
    """Measure how fast the polar assembly approaches the reduced one on a fixed smooth vector."""
    bump = sample or AlgebraSample(Character.of(0), np.pi / 2, np.pi / 4)
    spacings, discrepancies = [], []
    for n_points in grid_sizes:
        model = build_sphere(k_lift, n_points, 2, margin)
        values = bump.values(model.orbit_grid)
        xi = np.concatenate([values, values * np.cos(model.orbit_grid)]).astype(complex)
        spacings.append(model.spacing)
        discrepancies.append(assembly_discrepancy(model, m, xi))
    logger.debug("Assembly discrepancies %s", discrepancies)
    return ConvergenceStudy(tuple(grid_sizes), tuple(spacings), tuple(discrepancies))

