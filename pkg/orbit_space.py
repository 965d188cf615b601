"""Finite topological models of the orbit space M/T^n, used to decide the spectral subspace assumption."""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING

from errors import ConfigurationError

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from sectors import Character


@dataclasses.dataclass(frozen=True)
class Cell:
    """Interval cell of the orbit space, with a flag for each end saying whether it is included."""

    lo: float
    hi: float
    include_lo: bool = True
    include_hi: bool = True

    def touches(self, other: Cell) -> bool:
        """Return True if the union of the two cells is connected at a shared endpoint."""
        if self.hi == other.lo:
            return self.include_hi or other.include_lo
        if other.hi == self.lo:
            return other.include_hi or self.include_lo
        return False

    def label(self) -> str:
        """Interval notation."""
        if self.lo == self.hi:
            return f"{{{self.lo:g}}}"
        left = "[" if self.include_lo else "("
        right = "]" if self.include_hi else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclasses.dataclass(frozen=True)
class OrbitSpaceModel:
    """Ordered cells of M/T^n with the support of each spectral subspace as a set of cell indices.

    Characters missing from ``subspace_support`` are treated as supported everywhere. The
    trivial character always has full support. ``periodic`` glues the last cell to the first.
    """

    cells: tuple[Cell, ...]
    subspace_support: Mapping[Character, frozenset[int]]
    periodic: bool = False

    def __post_init__(self) -> None:
        """Reject an empty cell list."""
        if not self.cells:
            msg = "orbit space model has no cells"
            raise ConfigurationError(msg)

    @property
    def full(self) -> frozenset[int]:
        """Every cell."""
        return frozenset(range(len(self.cells)))

    def support(self, chi: Character) -> frozenset[int]:
        """Support of the spectral subspace of ``chi``."""
        if not any(chi.k):
            return self.full
        return self.subspace_support.get(chi, self.full)

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """Index pairs of cells whose union is connected."""
        pairs = [
            (i, j)
            for i in range(len(self.cells))
            for j in range(i + 1, len(self.cells))
            if self.cells[i].touches(self.cells[j])
        ]
        if self.periodic and len(self.cells) > 1:
            pairs.append((0, len(self.cells) - 1))
        return pairs

    def is_clopen(self, support: frozenset[int]) -> bool:
        """A union of cells is clopen iff no connected adjacency crosses its boundary."""
        return all((i in support) == (j in support) for i, j in self.adjacent_pairs())

    def describe(self) -> list[str]:
        """Cell labels for reports."""
        return [cell.label() for cell in self.cells]


def point() -> OrbitSpaceModel:
    """Orbit space of a torus acting on itself."""
    return OrbitSpaceModel((Cell(0.0, 0.0),), {})


def circle() -> OrbitSpaceModel:
    """Orbit space of a free action with circle quotient."""
    return OrbitSpaceModel((Cell(0.0, 1.0, include_hi=False),), {}, periodic=True)


def interval(
    lo: float,
    hi: float,
    characters: list[Character],
    *,
    include_ends: bool,
    interior_only: Callable[[Character], bool] | None = None,
) -> OrbitSpaceModel:
    """Interval orbit space, optionally with its two endpoints as separate point cells.

    With ``include_ends`` the endpoints are fixed points of the action; characters selected by
    ``interior_only`` have spectral subspaces vanishing there.
    """
    if not include_ends:
        return OrbitSpaceModel((Cell(lo, hi, include_lo=False, include_hi=False),), {})
    cells = (Cell(lo, lo), Cell(lo, hi, include_lo=False, include_hi=False), Cell(hi, hi))
    select = interior_only or (lambda chi: any(chi.k))
    supports = {chi: frozenset({1}) for chi in characters if select(chi)}
    return OrbitSpaceModel(cells, supports)
