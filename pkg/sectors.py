"""Character-indexed sector spaces and shift-block operators.

A torus-equivariant Hilbert space splits as a sum of sectors H_k, one per character k of the
torus. Operators are stored as dense blocks H_k -> H_{k+mu} keyed by (shift mu, source k) and
truncated to a finite window of characters.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
from collections.abc import Callable, Iterator, Mapping
from typing import TYPE_CHECKING, overload

import numpy as np
from scipy import sparse

from errors import DimensionError, PreconditionError, WindowError
from graded_core import GradedMatrix, Parity, koszul_sign, spectral_norm

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, order=True)
class Character:
    """Character of the n-torus, t -> exp(2 pi i k.t), labelled by its integer vector k.

    Examples
    --------
        >>> Character.of(1, -2) + Character.of(0, 3)
        Character(k=(1, 1))

    """

    k: tuple[int, ...]

    @classmethod
    def of(cls, *values: int) -> Character:
        """Build a character from its components."""
        return cls(tuple(int(v) for v in values))

    @classmethod
    def zero(cls, n: int) -> Character:
        """The trivial character."""
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, j: int) -> Character:
        """The j-th basis character e_j, 1-based."""
        return cls(tuple(int(i == j - 1) for i in range(n)))

    @property
    def n(self) -> int:
        """Rank of the torus."""
        return len(self.k)

    def __add__(self, other: Character) -> Character:
        """Group operation."""
        _check_rank(self, other)
        return Character(tuple(a + b for a, b in zip(self.k, other.k, strict=True)))

    def __neg__(self) -> Character:
        """Inverse character."""
        return Character(tuple(-a for a in self.k))

    def __sub__(self, other: Character) -> Character:
        """Difference."""
        return self + (-other)

    @property
    def norm1(self) -> int:
        """Sum of absolute components."""
        return sum(abs(a) for a in self.k)

    @property
    def max_abs(self) -> int:
        """Largest absolute component."""
        return max((abs(a) for a in self.k), default=0)

    def label(self) -> str:
        """Short label: the integer for rank one, the tuple otherwise."""
        return str(self.k[0]) if self.n == 1 else str(self.k)


def _check_rank(a: Character, b: Character) -> None:
    if a.n != b.n:
        msg = f"characters of rank {a.n} and {b.n}"
        raise DimensionError(msg)


@dataclasses.dataclass(frozen=True)
class TruncationWindow:
    """Finite set of characters {k : |k_j| <= K for all j}."""

    K: int
    n: int = 1

    def __post_init__(self) -> None:
        """Validate the bounds."""
        if self.K < 0 or self.n < 1:
            msg = f"invalid window K={self.K}, n={self.n}"
            raise ValueError(msg)

    def contains(self, chi: Character) -> bool:
        """Return True if ``chi`` lies in the window."""
        return chi.n == self.n and chi.max_abs <= self.K

    def characters(self) -> list[Character]:
        """All characters in the window, sorted."""
        return [Character(k) for k in itertools.product(range(-self.K, self.K + 1), repeat=self.n)]

    def interior(self, margin: int) -> TruncationWindow:
        """The window shrunk by a safety margin."""
        return TruncationWindow(max(self.K - margin, 0), self.n)

    def require(self, chi: Character) -> None:
        """Raise unless ``chi`` lies in the window."""
        if not self.contains(chi):
            msg = f"character {chi.label()} lies outside the window K={self.K}"
            raise WindowError(msg)


@dataclasses.dataclass(frozen=True)
class SectorSpace:
    """Truncated sum of sectors with the graded dimension of each block."""

    window: TruncationWindow
    block_dims: Mapping[Character, tuple[int, int]]

    def __post_init__(self) -> None:
        """Block dimensions must be given exactly on the window."""
        if set(self.block_dims) != set(self.window.characters()):
            msg = "block dimensions must be defined exactly on the window"
            raise DimensionError(msg)

    @classmethod
    def uniform(cls, window: TruncationWindow, even_dim: int, odd_dim: int = 0) -> SectorSpace:
        """Every sector has the same graded dimension."""
        return cls(window, {chi: (even_dim, odd_dim) for chi in window.characters()})

    def characters(self) -> list[Character]:
        """Sectors in sorted order."""
        return self.window.characters()

    def dims(self, chi: Character) -> tuple[int, int]:
        """Graded dimension of one sector."""
        self.window.require(chi)
        return self.block_dims[chi]

    def offsets(self) -> dict[Character, int]:
        """Start index of each sector in the dense layout."""
        offsets, start = {}, 0
        for chi in self.characters():
            offsets[chi] = start
            start += sum(self.block_dims[chi])
        return offsets

    @property
    def total_dim(self) -> int:
        """Dimension of the whole truncated space."""
        return sum(sum(d) for d in self.block_dims.values())


BlockKey = tuple[Character, Character]


class LazyBlocks(Mapping[BlockKey, GradedMatrix]):
    """Block mapping whose entries are assembled on access and not kept."""

    def __init__(self, keys: Iterable[BlockKey], factory: Callable[[BlockKey], GradedMatrix]) -> None:
        """Store the keys and the block factory."""
        self._keys = tuple(keys)
        self._key_set = frozenset(self._keys)
        self._factory = factory

    def __getitem__(self, key: BlockKey) -> GradedMatrix:
        """Assemble one block."""
        if key not in self._key_set:
            raise KeyError(key)
        return self._factory(key)

    def __iter__(self) -> Iterator[BlockKey]:
        """Iterate over the keys."""
        return iter(self._keys)

    def __len__(self) -> int:
        """Number of blocks."""
        return len(self._keys)

    def __contains__(self, key: object) -> bool:
        """Membership without assembling."""
        return key in self._key_set


@dataclasses.dataclass(frozen=True, eq=False)
class SectorVector:
    """Vector stored as one dense component per sector."""

    space: SectorSpace
    components: Mapping[Character, NDArray[np.complex128]]

    @classmethod
    def zeros(cls, space: SectorSpace) -> SectorVector:
        """The zero vector."""
        return cls(space, {chi: np.zeros(sum(space.dims(chi)), dtype=complex) for chi in space.characters()})

    def norm(self) -> float:
        """Hilbert norm."""
        return float(np.sqrt(sum(np.vdot(v, v).real for v in self.components.values())))

    def to_dense(self) -> NDArray[np.complex128]:
        """Concatenate the components in sector order."""
        return np.concatenate([self.components[chi] for chi in self.space.characters()])


@dataclasses.dataclass(frozen=True, eq=False)
class SectorOperator:
    """Family of blocks H_k -> H_{k+mu}, keyed by (shift mu, source k).

    A block is present only when both k and k+mu lie in the window. Operators of equivariant
    degree zero have the single shift 0. ``truncation_loss`` counts block products dropped
    because their target left the window.
    """

    space: SectorSpace
    blocks: Mapping[BlockKey, GradedMatrix]
    parity: Parity | None = Parity.EVEN
    truncation_loss: int = 0

    def __post_init__(self) -> None:
        """Every block must start and end inside the window."""
        window = self.space.window
        for shift, source in self.blocks:
            if not (window.contains(source) and window.contains(source + shift)):
                msg = f"block {shift.label()} from sector {source.label()} leaves the window"
                raise WindowError(msg)

    @classmethod
    def from_function(
        cls,
        space: SectorSpace,
        shift: Character,
        block: Callable[[Character], GradedMatrix],
        parity: Parity = Parity.EVEN,
        *,
        lazy: bool = False,
    ) -> SectorOperator:
        """Build a shift-homogeneous operator from a per-source block function."""
        keys = [(shift, k) for k in space.characters() if space.window.contains(k + shift)]
        if lazy:
            return cls(space, LazyBlocks(keys, lambda key: block(key[1])), parity)
        return cls(space, {key: block(key[1]) for key in keys}, parity)

    @classmethod
    def identity(cls, space: SectorSpace) -> SectorOperator:
        """The identity operator."""
        zero = Character.zero(space.window.n)
        return cls.from_function(space, zero, lambda k: GradedMatrix.identity(*space.dims(k)))

    @property
    def shifts(self) -> list[Character]:
        """Distinct shifts, sorted."""
        return sorted({shift for shift, _ in self.blocks})

    def __add__(self, other: SectorOperator) -> SectorOperator:
        """Blockwise sum."""
        _check_same_space(self, other)
        blocks = dict(self.blocks.items())
        for key, block in other.blocks.items():
            blocks[key] = blocks[key] + block if key in blocks else block
        parity = self.parity if self.parity == other.parity else None
        return SectorOperator(self.space, blocks, parity, self.truncation_loss + other.truncation_loss)

    def scale(self, value: complex) -> SectorOperator:
        """Multiply by a scalar; lazy operators stay lazy."""
        source = self.blocks
        blocks: Mapping[BlockKey, GradedMatrix]
        if isinstance(source, LazyBlocks):
            blocks = LazyBlocks(list(source), lambda key: source[key].scale(value))
        else:
            blocks = {key: block.scale(value) for key, block in source.items()}
        return SectorOperator(self.space, blocks, self.parity, self.truncation_loss)

    def __sub__(self, other: SectorOperator) -> SectorOperator:
        """Blockwise difference."""
        return self + other.scale(-1)

    def __neg__(self) -> SectorOperator:
        """Negation."""
        return self.scale(-1)

    def adjoint(self) -> SectorOperator:
        """Adjoint: the (mu, k) block becomes the conjugate transpose at (-mu, k+mu)."""
        return adjoint(self)

    def homogeneous_parts(self) -> list[SectorOperator]:
        """Split into even and odd parts blockwise."""
        if self.parity is not None:
            return [self]
        even = {key: block.even_part() for key, block in self.blocks.items()}
        odd = {key: block.odd_part() for key, block in self.blocks.items()}
        return [
            SectorOperator(self.space, even, Parity.EVEN, self.truncation_loss),
            SectorOperator(self.space, odd, Parity.ODD, self.truncation_loss),
        ]

    def apply(self, vector: SectorVector) -> SectorVector:
        """Apply the operator to a sector vector."""
        result = {chi: np.zeros_like(v) for chi, v in SectorVector.zeros(self.space).components.items()}
        for (shift, source), block in self.blocks.items():
            result[source + shift] += block.apply(vector.components[source])
        return SectorVector(self.space, result)

    def to_dense(self) -> NDArray[np.complex128]:
        """Dense matrix on the whole truncated space, sectors in sorted order."""
        offsets = self.space.offsets()
        dense = np.zeros((self.space.total_dim, self.space.total_dim), dtype=complex)
        for (shift, source), block in self.blocks.items():
            row, col = offsets[source + shift], offsets[source]
            dense[row : row + block.dim, col : col + block.dim] = block.entries
        return dense


def _check_same_space(a: SectorOperator, b: SectorOperator) -> None:
    if a.space != b.space:
        msg = "operators act on different sector spaces"
        raise DimensionError(msg)


def adjoint(op: SectorOperator) -> SectorOperator:
    """Adjoint operator."""
    blocks = {(-shift, source + shift): block.adjoint() for (shift, source), block in op.blocks.items()}
    return SectorOperator(op.space, blocks, op.parity, op.truncation_loss)


@overload
def sector_projection(x: SectorOperator, chi: Character) -> SectorOperator: ...


@overload
def sector_projection(x: SectorVector, chi: Character) -> SectorVector: ...


def sector_projection(x: SectorOperator | SectorVector, chi: Character) -> SectorOperator | SectorVector:
    """Apply the spectral projection onto the sector ``chi``.

    For a vector, every component except ``chi`` is zeroed. For an operator, only the blocks with
    source ``chi`` are kept, i.e. the operator is composed with P_chi on the right.

    Raises:
    ------
        WindowError: If ``chi`` is outside the window.
    """
    x.space.window.require(chi)
    if isinstance(x, SectorVector):
        components = {
            k: (v.copy() if k == chi else np.zeros_like(v)) for k, v in x.components.items()
        }
        return SectorVector(x.space, components)
    blocks = {key: x.blocks[key] for key in x.blocks if key[1] == chi}
    return SectorOperator(x.space, blocks, x.parity, x.truncation_loss)


def projection_operator(space: SectorSpace, chi: Character) -> SectorOperator:
    """P_chi as a sector operator."""
    return sector_projection(SectorOperator.identity(space), chi)


def partition_of_identity(space: SectorSpace) -> bool:
    """Return True if the sector projections sum exactly to the identity."""
    total = functools.reduce(
        lambda a, b: a + b,
        (projection_operator(space, chi) for chi in space.characters()),
    )
    identity = SectorOperator.identity(space)
    return set(total.blocks) == set(identity.blocks) and all(
        np.array_equal(total.blocks[key].entries, block.entries) for key, block in identity.blocks.items()
    )


def compose(a: SectorOperator, b: SectorOperator) -> SectorOperator:
    """Composition with closed-window bookkeeping.

    (A o B)_{mu+nu, k} = sum over A_{mu, k+nu} B_{nu, k}. Products whose target sector leaves the
    window are dropped and added to the truncation loss.
    """
    _check_same_space(a, b)
    window = a.space.window
    a_shifts = a.shifts
    blocks: dict[BlockKey, GradedMatrix] = {}
    loss = a.truncation_loss + b.truncation_loss
    for (nu, source), b_block in b.blocks.items():
        middle = source + nu
        for mu in a_shifts:
            if not window.contains(middle + mu):
                loss += 1
                continue
            if (mu, middle) not in a.blocks:
                continue
            key = (mu + nu, source)
            product = a.blocks[(mu, middle)] @ b_block
            blocks[key] = blocks[key] + product if key in blocks else product
    parity = None if a.parity is None or b.parity is None else a.parity + b.parity
    if loss > a.truncation_loss + b.truncation_loss:
        logger.debug("Composition dropped %d block products at the window edge", loss)
    return SectorOperator(a.space, blocks, parity, loss)


def graded_commutator_sector(a: SectorOperator, b: SectorOperator) -> SectorOperator:
    """Graded commutator AB - (-1)^(deg A deg B) BA of sector operators, bilinear in general."""
    _check_same_space(a, b)
    if a.parity is None or b.parity is None:
        parts = [graded_commutator_sector(x, y) for x in a.homogeneous_parts() for y in b.homogeneous_parts()]
        return functools.reduce(lambda x, y: x + y, parts)
    return compose(a, b) - compose(b, a).scale(koszul_sign(a.parity, b.parity))


def per_sector_norms(op: SectorOperator) -> dict[Character, float]:
    """Exact norm of A P_k for each source sector k.

    The blocks leaving one sector land in distinct sectors, so stacking them gives the exact norm.
    """
    columns: dict[Character, list[GradedMatrix]] = {}
    for (_, source), block in op.blocks.items():
        columns.setdefault(source, []).append(block)
    norms = {chi: 0.0 for chi in op.space.characters()}
    for source, stack in columns.items():
        norms[source] = spectral_norm(_stack_rows(stack))
    return norms


def _stack_rows(blocks: list[GradedMatrix]) -> NDArray[np.complex128] | sparse.csr_array:
    if any(block.is_sparse for block in blocks):
        return sparse.csr_array(sparse.vstack([sparse.csr_array(block.data) for block in blocks], format="csr"))
    return np.vstack([block.data for block in blocks])


def norm_is_exact(op: SectorOperator) -> bool:
    """Return True if ``operator_norm`` is exact rather than a bound."""
    return len(op.shifts) <= 1


def operator_norm(op: SectorOperator) -> float:
    """Largest singular value over all blocks.

    Exact for shift-homogeneous operators. With several shifts the per-shift maxima are summed,
    which is an upper bound; ``norm_is_exact`` reports which case applies.
    """
    per_shift: dict[Character, float] = {}
    for (shift, _), block in op.blocks.items():
        per_shift[shift] = max(per_shift.get(shift, 0.0), block.norm())
    return float(sum(per_shift.values()))


def restrict_to_sector(op: SectorOperator, zeta: Character) -> GradedMatrix:
    """The block of a shift-0 operator at sector ``zeta``.

    Raises:
    ------
        PreconditionError: If the operator has a non-zero shift.
        WindowError: If ``zeta`` is outside the window.
    """
    zero = Character.zero(op.space.window.n)
    if any(shift != zero for shift in op.shifts):
        msg = "restriction to a sector needs an operator of shift 0"
        raise PreconditionError(msg)
    op.space.window.require(zeta)
    if (zero, zeta) in op.blocks:
        return op.blocks[(zero, zeta)]
    parity = Parity.EVEN if op.parity is None else op.parity
    return GradedMatrix.zeros(*op.space.dims(zeta), parity=parity)


def self_adjoint_defect(op: SectorOperator) -> float:
    """Relative defect ||A - A*|| / ||A|| computed sector by sector for shift-0 operators."""
    worst, scale = 0.0, 0.0
    for block in op.blocks.values():
        worst = max(worst, (block - block.adjoint()).norm())
        scale = max(scale, block.norm())
    return worst / scale if scale else worst
